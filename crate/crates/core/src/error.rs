use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("index {index} out of range for n = {n} (n! = {count})")]
    IndexOutOfRange { index: u64, n: usize, count: u64 },

    #[error("size mismatch: expected n = {expected}, got n = {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("problem size n = {n} exceeds the enumeration cap of n = {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("degenerate instance: every assignment has the same cost")]
    Degenerate,

    #[error("instance optimum is not known; compute the quality vector first")]
    MissingOptimum,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
