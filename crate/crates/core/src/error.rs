use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter or function argument outside its domain.
    #[error("domain error: {name} must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("sample is empty")]
    EmptySample,

    /// An observation that is zero, negative or not finite. `index` is zero-based.
    #[error("observation {index} is not a strictly positive finite number: {value}")]
    InvalidObservation { index: usize, value: f64 },

    /// All observations are equal (or there is only one), so the shape
    /// likelihood has no finite maximiser.
    #[error("degenerate sample: log-moment gap {gap:e} is zero, shape MLE diverges")]
    DegenerateSample { gap: f64 },

    #[error("shape MLE did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_positive<T: crate::Real>(name: &'static str, value: T) -> Result<T> {
    if value > T::zero() && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            name,
            requirement: "strictly positive and finite",
            value: value.to_f64().unwrap_or(f64::NAN),
        })
    }
}
