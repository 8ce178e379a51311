use thiserror::Error;

/// Errors raised by the collocation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElmError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value {value} at x = {x} while evaluating {what}")]
    NonFinite {
        what: &'static str,
        x: f64,
        value: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,

    #[error("finite-difference system is singular (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unknown problem `{0}`; valid names: sin_bump, polynomial, advection_layer, reaction_layer, atan_layer, gaussian_peak, comb")]
    UnknownProblem(String),
}

pub type Result<T> = std::result::Result<T, ElmError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> ElmError {
    ElmError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
