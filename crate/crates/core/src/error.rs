use thiserror::Error;

use crate::quadrature::IntegralResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A material with Im ε < 0 or Im μ < 0 would amplify the field.
    #[error("passivity violation: {quantity} has negative imaginary part {value}")]
    PassivityViolation { quantity: &'static str, value: f64 },

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Reflection denominator vanished: a lossless surface or guided mode sits
    /// exactly on the integration path.
    #[error("degenerate denominator in {polarization}-polarized reflection coefficient")]
    DegenerateDenominator { polarization: &'static str },

    #[error(
        "quadrature did not converge: error estimate {:.3e} for value {:.6e}",
        .result.error_estimate,
        .result.value.norm()
    )]
    NotConverged { result: IntegralResult },

    /// The evanescent integral needs a strictly positive distance to decay.
    #[error("evanescent integral does not decay for distance {0}")]
    NonDecaying(f64),

    #[error("outside domain of validity: {0}")]
    DomainError(String),
}
