use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space mismatch: dimension {left} vs {right}")]
    SpaceMismatch { left: usize, right: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree underflow: degree {degree} is below the required {required}")]
    DegreeUnderflow { degree: usize, required: usize },

    #[error("degree overflow: degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },

    #[error("contraction underflow: cannot contract {k} times into degrees ({left}, {right})")]
    ContractionUnderflow { k: usize, left: usize, right: usize },

    #[error("invalid index set {indices:?} for dimension {dim}")]
    InvalidIndex { indices: Vec<usize>, dim: usize },

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    #[error("form is not in lambda^{degree}")]
    NotInLambdaP { degree: usize },

    #[error("invalid complex structure: {0}")]
    InvalidComplexStructure(String),

    #[error("invalid derivative data: {0}")]
    InvalidDerivative(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("ill-conditioned spectrum: {0}")]
    IllConditionedSpectrum(String),

    #[error("inconsistent moments: {0}")]
    MomentInconsistency(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("degenerate frame: {0}")]
    FrameRank(String),

    #[error("frame inconsistency: {0}")]
    FrameInconsistency(String),

    #[error("invalid transition data: {0}")]
    InvalidTransition(String),

    #[error("invalid orthonormal frame: {0}")]
    InvalidOrthonormalFrame(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
