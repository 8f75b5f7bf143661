use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("halfspace system is unbounded")]
    Unbounded,
    #[error("halfspace system is infeasible")]
    Infeasible,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("count is not constant: {0}")]
    NotConstant(String),
    #[error("no generic shift found after {0} attempts")]
    ResampleExhausted(usize),
    #[error("cell budget of {0} exceeded")]
    CellBudgetExceeded(usize),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("centroid of a decomposition cell lies on a boundary: {0}")]
    NonGenericCentroid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
