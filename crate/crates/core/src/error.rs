use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The value exists but only its logarithm fits in an `f64`.
    #[error("value exp({ln_value}) is only representable in log domain")]
    Overflow { ln_value: f64 },

    #[error("quadrature did not converge: estimate {estimate} with error {abs_error} after {evaluations} evaluations")]
    Quadrature {
        estimate: f64,
        abs_error: f64,
        evaluations: usize,
    },

    #[error("operator and state live on different grids")]
    GridMismatch,

    #[error("target {target} outside the attainable interval ({lo}, {hi})")]
    OutOfRange { target: f64, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
