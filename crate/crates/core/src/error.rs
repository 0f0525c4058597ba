use thiserror::Error;

/// Errors produced by the numerical layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `f'` never exceeded the target on the searched interval.
    #[error("cannot invert f' at t = {target}: f' stayed below t up to s = {upper}")]
    InversionRange { target: f64, upper: f64 },

    #[error("quadrature did not converge on [{lower}, {upper}]: error estimate {estimate:e} > tolerance {tolerance:e}")]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("optimization failed after {iterations} iterations ({reason}): energy {energy:e}, gradient norm {grad_norm:e}")]
    Optimization {
        iterations: usize,
        energy: f64,
        grad_norm: f64,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
