use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read or write instance: {0}")]
    Io(#[from] std::io::Error),

    #[error("failed to parse instance: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix has no nonzero column")]
    ZeroMatrix,

    #[error("column {0} is zero and cannot be normalized")]
    ZeroColumn(usize),

    #[error("columns are not normalized; normalize the instance first")]
    NotNormalized,

    #[error("invalid quadratic objective: {0}")]
    InvalidObjective(String),

    #[error("invalid iterate: {0}")]
    InvalidIterate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line-search precondition violated: directional derivative {0} is not negative")]
    NotDescent(f64),

    #[error("curvature along the search direction is not positive ({0})")]
    NonPositiveCurvature(f64),

    #[error("linear program failed numerically: {0}")]
    LpNumerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
