use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("no inverse: zero has no multiplicative inverse")]
    NoInverse,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("parity check violates Hamming property: {0}")]
    NotHamming(String),
    #[error("code is not systematic; use recovery_sets_general instead")]
    NotSystematic,
    #[error("operation requires a binary code (q = 2), got q = {0}")]
    NotBinary(u32),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid allocation: {0}")]
    InvalidAllocation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(u64),
    #[error("search limit exceeded: {0}")]
    SearchLimit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Resource ceilings (pivot or search limits) as opposed to bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::PivotLimit(_) | Error::SearchLimit(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
