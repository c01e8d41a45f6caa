use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QhamError {
    #[error("rank mismatch: expected SU({expected}), got SU({found})")]
    RankMismatch { expected: usize, found: usize },

    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),

    #[error("matrix is not in SU({n}): {reason}")]
    NotInGroup { n: usize, reason: String },

    #[error("matrix is not in su({n}): {reason}")]
    NotInAlgebra { n: usize, reason: String },

    #[error("invalid alcove point: {0}")]
    InvalidAlcovePoint(String),

    #[error("tangent vector is not based at the given point")]
    BaseMismatch,

    #[error("invalid space description: {0}")]
    InvalidSpace(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("empty sample batch")]
    EmptyBatch,

    #[error("ambiguous principal face: signatures {first} and {second} both attain class dimension {dimension}")]
    AmbiguousFace {
        first: String,
        second: String,
        dimension: usize,
    },

    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),

    #[error("Takagi factorization failed: {0}")]
    FactorizationFailed(String),

    #[error("fixed-point solver failure rate {rate:.3} exceeds the abort threshold after {attempts} attempts")]
    SolverAbort { rate: f64, attempts: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, QhamError>;
