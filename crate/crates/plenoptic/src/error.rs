use thiserror::Error;

/// Errors reported by the simulators, bound evaluators and codecs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),

    #[error("exact integer overflow: {0}")]
    Overflow(String),

    #[error("enumeration budget exceeded: need about {needed} weighted terms, cap is {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("window does not cover the path: {0}")]
    WindowTooSmall(String),

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
