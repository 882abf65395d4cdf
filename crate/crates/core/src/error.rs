use thiserror::Error;

/// Every failure a computation in this crate can report.
///
/// Variants carry enough context to reproduce the failing call; none of them
/// is ever raised for a numerical disagreement that fits inside a certified
/// bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment order must be at least {min}, got {got}")]
    InvalidOrder { got: u64, min: u64 },

    #[error("degree {degree} exceeds the support size {limit}")]
    DegreeOutOfRange { degree: u64, limit: u64 },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("series does not terminate and approximation was not requested")]
    NonTerminating,

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("the base-point is zero where a nonzero point is required")]
    ZeroPoint,

    #[error("tail cannot be bounded: {0}")]
    TailNotBounded(String),

    #[error("independent forms disagree: {0}")]
    FormMismatch(String),

    #[error("cannot parse rational `{0}`")]
    Parse(String),
}

pub type QResult<T> = Result<T, QError>;
