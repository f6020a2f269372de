//! Error type shared across the crate.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// A constructor argument violates a type invariant.
    InvalidParameter { what: &'static str, detail: String },
    /// An exactness guard was exceeded (e.g. the reference LP solver).
    SizeLimit {
        what: &'static str,
        limit: usize,
        got: usize,
    },
    /// Pool length does not match the number of random-order times.
    PoolSizeMismatch { expected: usize, got: usize },
    /// A static adversary emitted the wrong number of items for its cover.
    StrategyMismatch { expected: usize, got: usize },
    /// A stated hypothesis of a checked inequality does not hold.
    HypothesisUnmet { what: &'static str, detail: String },
    /// An iterative numeric procedure did not converge.
    NonConvergence { what: &'static str },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::InvalidParameter { what, detail } => {
                write!(f, "invalid {what}: {detail}")
            }
            CoreError::SizeLimit { what, limit, got } => {
                write!(f, "{what}: size {got} exceeds limit {limit}")
            }
            CoreError::PoolSizeMismatch { expected, got } => {
                write!(f, "pool has {got} items, schedule needs {expected}")
            }
            CoreError::StrategyMismatch { expected, got } => {
                write!(
                    f,
                    "static adversary emitted {got} items, cover has {expected} times"
                )
            }
            CoreError::HypothesisUnmet { what, detail } => {
                write!(f, "{what}: hypothesis unmet: {detail}")
            }
            CoreError::NonConvergence { what } => write!(f, "{what}: did not converge"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CoreError {}
