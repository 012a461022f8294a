use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series vanishes below its horizon q^({order}/24); no leading term to invert")]
    ZeroLeadingTerm { order: i64 },

    #[error("exponent q^({exponent}/24) scaled by {factor} leaves the 1/24 grid")]
    OffGrid { exponent: i64, factor: String },

    #[error("operation needs integer exponents, found q^({exponent}/24)")]
    NonIntegerExponents { exponent: i64 },

    #[error("coefficient of q^({exponent}/24) lies at or beyond the horizon q^({order}/24)")]
    BeyondOrder { exponent: i64, order: i64 },

    #[error("infinite q-Pochhammer product with negative start exponent {alpha}/24 does not converge")]
    DivergentSpec { alpha: i64 },

    #[error("invalid Pochhammer step {step}; must be positive")]
    InvalidStep { step: i64 },

    #[error("exact cone summation only supports the Hecke characteristic")]
    UnsupportedCharacteristic,

    #[error("invalid theta characteristic: {0}")]
    InvalidCharacteristic(String),

    #[error("lattice radius {radius} leaves an estimated tail {est_tail:e} above tolerance {tol:e}")]
    RadiusTooSmall { radius: u32, est_tail: f64, tol: f64 },

    #[error("evaluation failed at tau = {re} + {im}i: {reason}")]
    EvaluationFailure { re: f64, im: f64, reason: String },

    #[error("unknown identity selector `{0}`")]
    UnknownIdentity(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
