use thiserror::Error;

use crate::quadrature::QuadratureError;
use crate::special::SpecialFunctionError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    SpecialFunction(#[from] SpecialFunctionError),

    #[error(transparent)]
    Quadrature(#[from] QuadratureError),

    /// Both the closed form and the quadrature fallback failed.
    #[error("evaluation failed: analytic path: {analytic}; quadrature fallback: {fallback}")]
    Evaluation {
        analytic: String,
        fallback: QuadratureError,
    },
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<(), Error> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {value}"),
        })
    }
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<(), Error> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be non-negative and finite, got {value}"),
        })
    }
}
