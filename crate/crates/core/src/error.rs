use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("rank deficient input: residual norm {residual:e} at position {index}")]
    RankDeficient { index: usize, residual: f64 },

    #[error("expected {expected} elements, got {actual}")]
    Count { expected: usize, actual: usize },

    #[error("validation failed: {0}")]
    ValidationFailure(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("unsupported dimension {0}: only prime dimensions are supported")]
    UnsupportedDimension(usize),

    #[error("not a fiducial operator: {0}")]
    NotFiducial(String),

    #[error("lambda {lambda} out of range (0, {max}]{detail}")]
    LambdaRange {
        lambda: f64,
        max: f64,
        detail: String,
    },

    #[error("degenerate GSIC POVM: {0}")]
    DegenerateGsic(String),

    #[error("element {0} has zero trace")]
    DegenerateElement(usize),

    #[error("POVM is not informationally complete (span rank {rank} < {required})")]
    NotInformationallyComplete { rank: usize, required: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("argument out of range: {0}")]
    Range(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}
