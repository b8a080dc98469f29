use thiserror::Error;

/// Errors raised by constructors and distance computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("source measure has atoms; the monotone rearrangement is only a map for atomless sources")]
    SourceHasAtoms,

    #[error("map is not monotone nondecreasing near x = {0}")]
    NonMonotoneMap(f64),

    #[error("operation needs a piecewise (non-analytic) measure")]
    AnalyticNotSupported,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector is not unit length (norm {0})")]
    NonUnitVector(f64),

    #[error("radial map is only optimal for concentric shell mixtures")]
    NotConcentric,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
