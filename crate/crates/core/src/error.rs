use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A finite prefix was too short for the requested computation.
    #[error("needs more data: {what} must have length at least {required} (got {available})")]
    NeedsMoreData {
        what: &'static str,
        required: u64,
        available: u64,
    },

    /// An inequality that a construction guarantees did not hold.
    #[error("certificate violation: {0}")]
    CertificateViolation(String),

    #[error("inconsistent pair family: {0}")]
    InconsistentFamily(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
