//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact ring arithmetic.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("non-unit where a unit is required: {0}")]
    NonUnit(String),
    #[error("unsupported ideal: {0}")]
    UnsupportedIdeal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Errors from group-level operations and decompositions.
#[derive(Debug, Clone, Error)]
pub enum GroupError {
    #[error("rejected input: {0}")]
    Rejected(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("ring error: {0}")]
    Ring(#[from] RingError),
}

impl GroupError {
    /// Process exit code contract: 2 rejected input, 3 budget exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            GroupError::Budget(_) => 3,
            _ => 2,
        }
    }
}
