//! Modeling toolkit for French SMS shorthand.
//!
//! Text-message writing compresses standard French through three recurring
//! devices: consonant skeletons (`slt` for *salut*), rebus forms mixing
//! letters, digits and symbols (`2m1` for *demain*), and phonetic respelling
//! (`koi` for *quoi*). This crate provides executable models for all three,
//! plus the surrounding machinery needed to build and evaluate them:
//!
//! * [`text`] — character classification, diacritic handling and
//!   syllabification for French tokens;
//! * [`automata`] — weighted finite-state acceptors with Viterbi scoring and
//!   a line-oriented text serialization;
//! * [`skeleton`] — the consonant-skeleton rule cascade and a relaxed
//!   acceptor covering attested non-strict abbreviations;
//! * [`phonetic`] — the phonetic rewrite-rule catalogue and branching
//!   variant generator;
//! * [`rebus`] — a parametric acceptor scoring rebus plausibility;
//! * [`lexicon`] — building, serializing and querying abbreviation lexicons
//!   from frequency word lists;
//! * [`metric`] — the character recognition rate `TR = 100(#label - D) / #label`
//!   with free insertions;
//! * [`simulator`] — a seeded noisy channel plus log-linear decoder for
//!   comparing resource bundles on synthetic corpora.
//!
//! Scoring code is generic over the weight scalar (any [`Real`], i.e. `f32`
//! or `f64`); the aliases below fix the default precision used by the CLI
//! and the simulator.

pub mod automata;
pub mod error;
pub mod lexicon;
pub mod metric;
pub mod num;
pub mod phonetic;
pub mod rebus;
pub mod simulator;
pub mod skeleton;
pub mod text;

pub use error::{Error, Result};
pub use num::Real;

/// Default scalar for log-probability weights and rates.
pub type Weight = f64;

/// Weighted acceptor at the default precision.
pub type Acceptor = automata::WeightedAcceptor<Weight>;

/// Alignment report at the default precision.
pub type Report = metric::AlignmentReport<Weight>;

/// Rebus model at the default precision.
pub type Rebus = rebus::RebusModel<Weight>;
