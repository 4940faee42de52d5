use thiserror::Error;

/// Errors raised when inputs violate a model or numerical precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("sample is empty")]
    EmptySample,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample value {value} at index {index} is not admissible: {reason}")]
    BadSample {
        index: usize,
        value: f64,
        reason: &'static str,
    },
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureFailed { a: f64, b: f64 },
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
