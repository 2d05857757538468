use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree too low: {operation} needs n >= {min}, got {n}")]
    DegreeTooLow {
        operation: &'static str,
        n: usize,
        min: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("empty quadrature: every weight is zero")]
    EmptyQuadrature,

    #[error("membership: {0}")]
    Membership(String),

    #[error("zero-mass measure cannot be normalized")]
    ZeroMass,

    #[error("measure is not continuous: it carries {0} atom(s)")]
    NotContinuous(usize),

    #[error("division guard: {0}")]
    DivisionGuard(String),

    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    /// Schema validation failure; `field` names the offending field and index,
    /// e.g. `atoms[2].mass`.
    #[error("{field}: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of an iterative method to converge.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::NumericFailure(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
