use thiserror::Error;

use crate::mat::Mat;
use crate::recover::Alarm;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    Singular,

    /// A sweep would visit more items than the caller allowed.
    #[error("budget exceeded: {required} items requested, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A documented precondition does not hold. When the failure is a
    /// non-triangularizable element, it is carried as the witness.
    #[error("precondition failed: {message}")]
    Precondition {
        message: String,
        witness: Option<Box<Mat>>,
    },

    /// An assertion that the theory guarantees has failed.
    #[error("theorem-violation alarm: {0}")]
    TheoremViolation(Box<Alarm>),

    #[error("journal: {0}")]
    Journal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition {
            message: message.into(),
            witness: None,
        }
    }

    pub(crate) fn shape(message: impl Into<String>) -> Self {
        Error::ShapeMismatch(message.into())
    }

    pub(crate) fn arg(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }
}
