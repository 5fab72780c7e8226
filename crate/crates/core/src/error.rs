use thiserror::Error;

/// Errors raised by the recovery pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("non-finite value encountered: {0}")]
    Numerical(String),
    #[error("design matrix is rank deficient: {0}")]
    SingularDesign(String),
    #[error("no heavy sample found: {0}")]
    EnergyTooLow(String),
    #[error("frequency location failed: {0}")]
    LocationFailed(String),
}

impl Error {
    /// True for failures of the recovery itself, as opposed to bad input.
    pub fn is_recovery_failure(&self) -> bool {
        !matches!(self, Error::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
