use thiserror::Error;

/// Errors raised by the geometry toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} vectors, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("Jacobi identity fails: d(de{k}) = {witness}")]
    Jacobi { k: usize, witness: String },
    #[error("J does not square to -Id")]
    NotAlmostComplex,
    #[error("complex structure is not integrable")]
    NotIntegrable,
    #[error("form is not of pure bidegree")]
    MixedBidegree,
    #[error("metric is not J-compatible")]
    NotCompatible,
    #[error("positivity violated: {0}")]
    Positivity(String),
    #[error("parameter domain violated: {0}")]
    Domain(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("frame is not an orthonormal adapted frame")]
    NotAdapted,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
