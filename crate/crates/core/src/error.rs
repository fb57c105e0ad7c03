use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-invertible substitution for variable {0}")]
    NonInvertibleSubstitution(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index must be positive")]
    NonPositiveIndex,

    #[error("{0} is not a discriminant")]
    NotADiscriminant(i64),

    #[error("weight out of supported range: {0}")]
    WeightOutOfRange(i64),

    #[error("only degree 1 supported")]
    UnsupportedDegree,

    #[error("requires subgroup indices not in closed form")]
    NoClosedForm,

    #[error("insufficient precision: need completeness bound {required}, have {available}")]
    InsufficientPrecision { required: i64, available: i64 },

    #[error("index mismatch: {0} vs {1}")]
    IndexMismatch(i64, i64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
