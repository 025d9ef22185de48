use std::fmt;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Input violates a structural constraint (e.g. `q > K` or `K > P`).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// Input is valid but outside the declared limits of the exact path;
    /// callers should fall back to the asymptotic or Monte Carlo routes.
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(String),
    /// The requested quantity is undefined for these inputs
    /// (e.g. conditioning on an impossible event).
    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl fmt::Display) -> Self {
        Error::InvalidParameters(msg.to_string())
    }
    pub(crate) fn capacity(msg: impl fmt::Display) -> Self {
        Error::CapacityExceeded(msg.to_string())
    }
    pub(crate) fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
