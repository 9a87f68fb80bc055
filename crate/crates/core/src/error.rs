use thiserror::Error;

/// Errors raised by the arithmetic and criterion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument violated a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Exact division in Z[ζ] left a remainder.
    #[error("not divisible")]
    NotDivisible,

    /// The operation is only implemented for a subset of orders.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The residue symbol base and modulus share a rational prime factor.
    #[error("shared factor {factor} between the symbol argument and the modulus")]
    SharedFactor { factor: u64 },

    /// A proven identity failed to hold. Always an implementation bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
