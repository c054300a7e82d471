//! Crate-wide error type.

/// Errors reported by the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An operation received an empty token.
    #[error("empty token")]
    EmptyToken,

    /// The metric received a label that is empty after separator stripping.
    #[error("empty label")]
    EmptyLabel,

    /// Corpus-level aggregation over zero pairs.
    #[error("empty corpus")]
    EmptyCorpus,

    /// An acceptor violates its structural or stochastic invariants.
    #[error("invalid acceptor: {0}")]
    InvalidAcceptor(String),

    /// Model parameters outside their admissible range.
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// A confusion model violates its probability invariants.
    #[error("invalid confusion model: {0}")]
    InvalidConfusionModel(String),

    /// A line-oriented input file failed to parse.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
