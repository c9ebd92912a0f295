use thiserror::Error;

/// Errors raised by state construction, measures and the optimizer.
#[derive(Debug, Error)]
pub enum Error {
    /// A state or matrix failed a physical invariant (hermiticity, trace, positivity, norm).
    #[error("validation failed: {0}")]
    Validation(String),

    /// Arguments do not fit the operation (wrong dims, bad index, wrong parameter count).
    #[error("usage error: {0}")]
    Usage(String),

    /// A structural constraint was violated, e.g. a global layer support.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Malformed factory spec, relabeling name or state file.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
