use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("inexact division: remainder norm {remainder:e} exceeds tolerance {tolerance:e}")]
    InexactDivision { remainder: f64, tolerance: f64 },

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence { iterations: usize, worst_residual: f64 },

    #[error("degree {degree} exceeds configured cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },

    #[error("point count {found} does not match expected {expected}: {context}")]
    CountMismatch {
        found: usize,
        expected: usize,
        context: String,
    },

    #[error("lower-period degeneracy: factor for divisor k={k} vanishes")]
    LowerPeriodDegeneracy { k: u32 },

    #[error("transversality violation: smallest singular value {sigma_min:e} below {threshold:e}")]
    TransversalityViolation { sigma_min: f64, threshold: f64 },

    #[error("continuation from {center} stalled at t={t_reached}")]
    ContinuationFailure { center: String, t_reached: f64 },

    #[error("Newton refinement of the cycle diverged (near-parabolic parameter {param})")]
    NearParabolic { param: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not enough usable data points: {got} (need {need})")]
    InsufficientData { got: usize, need: usize },

    #[error("singular leading coefficient in resultant input")]
    SingularLeading,

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
