use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix is not Hermitian (max |m - m^dagger| = {max_deviation:.3e})")]
    NotHermitian { max_deviation: f64 },

    #[error("numerical failure: {0}")]
    NumericFailure(String),

    /// A state failed one of its validity invariants; `invariant` names it.
    #[error("invalid state: {invariant} ({detail})")]
    InvalidState {
        invariant: &'static str,
        detail: String,
    },

    #[error("non-physical input: {0}")]
    NonPhysical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
