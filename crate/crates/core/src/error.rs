use thiserror::Error;

/// Errors raised by the numerical kernels and samplers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate sampling window: {0}")]
    DegenerateWindow(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimate {value:e}, \
         error estimate {error:e} exceeds tolerance {tolerance:e}"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        value: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("{function} series did not converge after {terms} terms (last term {last_term:e})")]
    Series {
        function: &'static str,
        terms: usize,
        last_term: f64,
    },

    #[error("altitude range is a single point at {altitude} m; the steady-state law is a point mass")]
    PointMassAltitude { altitude: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

/// Checks `value > 0` and finite.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be positive and finite, got {value}")))
    }
}
