use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable count mismatch: {left:?} vs {right:?}")]
    VarCountMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("division is not exact")]
    NonExactDivision,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("degree must be at least {min}, got {got}")]
    DegreeTooSmall { min: usize, got: usize },

    #[error("cannot substitute 0 for {0}: it appears with a negative exponent")]
    ZeroLaurentSubstitution(String),

    #[error("variable {0} is out of range")]
    UnknownVariable(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i32, found: i32 },

    #[error("unknown label {0}")]
    UnknownLabel(String),

    #[error("leading coefficient a0 is zero; root at infinity is not supported")]
    LeadingCoefficientZero,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("invalid root profile: {0}")]
    InvalidProfile(String),

    #[error("formula verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal construction error: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
