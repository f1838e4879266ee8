use thiserror::Error;

/// Errors raised by the kicked-top library.
///
/// `Numerical` marks a violated numerical invariant (unitarity, trace,
/// positivity). Everything else is a caller-side input problem.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number: 2j = {0} is not a non-negative integer")]
    InvalidSpin(f64),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |A - A^dag| = {0:e})")]
    NotHermitian(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("numerical invariant violated: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
