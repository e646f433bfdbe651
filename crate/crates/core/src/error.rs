use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("non-positive weight a({grade},{index})")]
    NonPositiveWeight { grade: usize, index: usize },

    #[error("ladder violation: a({grade},{index}) > a({},{index})", grade + 1)]
    LadderViolation { grade: usize, index: usize },

    #[error("coordinate {index} lies outside the materialized window [0, {window})")]
    WindowExceeded { index: usize, window: usize },

    #[error("grade {grade} out of range (space has {grades} grades)")]
    GradeOutOfRange { grade: usize, grades: usize },

    #[error("zero functional has no dual bound")]
    ZeroFunctional,

    #[error("no pivot with nonzero residual pairing at step {step} of {stage}")]
    ExhaustedWithoutPivot { step: usize, stage: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("certification unavailable: {0}")]
    CertificationUnavailable(String),

    #[error("stage mismatch: {0}")]
    StageMismatch(String),

    #[error("radius {k} is not inside the disc of radius {radius}")]
    OutsideDomain { k: String, radius: String },

    #[error("point {point} has |z|₁ above the radius {k}")]
    OutsideRadius { point: String, k: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with any context layers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            e => e,
        }
    }
}
