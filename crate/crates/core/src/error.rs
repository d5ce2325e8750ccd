use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("fields differ: F_{left} vs F_{right}")]
    FieldMismatch { left: u32, right: u32 },

    #[error("generator count {n} is below the minimum {min}")]
    TooFewGenerators { n: usize, min: usize },

    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("expected a nonzero vector")]
    ZeroVector,

    #[error("matrix is singular")]
    Singular,

    #[error("vector does not span a central line of the subspace")]
    NotCentral,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{count} subspaces exceed the exhaustive ceiling {ceiling}; use sampling")]
    Infeasible { count: u128, ceiling: u128 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}
