use thiserror::Error;

use crate::ring::Domain;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported security level {0} (expected 2, 3 or 5)")]
    UnsupportedLevel(u8),

    #[error("polynomial is in the {found:?} domain, expected {expected:?}")]
    DomainMismatch { expected: Domain, found: Domain },

    #[error("invalid challenge: {0}")]
    InvalidChallenge(&'static str),

    #[error("coefficient {value} at index {index} outside [{min}, {max}]")]
    CoefficientOutOfRange {
        index: usize,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("expected {expected} bytes, got {found}")]
    InvalidLength { expected: usize, found: usize },

    #[error("malformed encoding: {0}")]
    Malformed(&'static str),

    #[error("absorb called after squeezing started")]
    AbsorbAfterSqueeze,
}

pub type Result<T> = core::result::Result<T, Error>;
