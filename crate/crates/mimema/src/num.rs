//! Scalar abstraction for weight-bearing code.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used for log-probabilities and rates: `f32` or `f64`.
///
/// `Display`/`FromStr` are required so weights survive the text
/// serializations unchanged.
pub trait Real:
    Float + FromPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, for defaults and literals.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any Real")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
}
