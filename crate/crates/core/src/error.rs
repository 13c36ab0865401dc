use thiserror::Error;

/// Errors produced by configuration, inference, and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (out of range, wrong dimension, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The objective cannot be met by any arm of the instance; rejected at
    /// configuration time rather than simulated.
    #[error("infeasible objective: {0}")]
    InfeasibleObjective(String),

    /// An internal consistency check failed. This indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::InfeasibleObjective(msg.into())
    }
}
