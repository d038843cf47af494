use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("series truncation: tail {tail:e} exceeds tolerance {tol:e} after {terms} terms")]
    Truncation { terms: usize, tail: f64, tol: f64 },
    #[error("enumeration of {requested} terms exceeds the cap of {cap}")]
    Resource { requested: f64, cap: usize },
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("Meijer-G contour cannot separate the pole families: {0}")]
    PoleCollision(String),
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("unsupported configuration for this evaluation path: {0}")]
    Unsupported(String),
    #[error("value {value} outside [{lo}, {hi}]: {what}")]
    OutOfBounds { what: String, value: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
