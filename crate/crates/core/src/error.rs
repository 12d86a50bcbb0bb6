use thiserror::Error;

/// Errors raised across the probability, geometry and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("proposition {index} is out of range for a space of {n} propositions")]
    UnknownProposition { index: usize, n: usize },

    #[error("too many propositions: {n} exceeds the cap of {cap}")]
    TooManyPropositions { n: usize, cap: usize },

    #[error("weights must be nonnegative (entry {index} is {value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("expected {expected} weights, found {found}")]
    WrongLength { expected: usize, found: usize },

    #[error("invalid joint-state key {key:?}: {reason}")]
    InvalidKey { key: String, reason: &'static str },

    #[error("conditioning event has zero probability")]
    ConditioningOnNull,

    #[error(
        "relative probability undefined: the mentioned propositions have zero observability mass"
    )]
    UndefinedRelativeProbability,

    #[error("proposition {0} appears in more than one literal")]
    DuplicateLiteral(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("projector {what} is not entrywise below the observability projector")]
    ProjectorNotDominated { what: &'static str },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not a Hermitian idempotent (deviation {deviation:e})")]
    NotProjector { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sq})")]
    NotUnitNorm { norm_sq: f64 },

    #[error("angle out of canonical range: {0}")]
    AngleOutOfRange(&'static str),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("insufficient data: the observed denominator count is zero")]
    InsufficientData,

    #[error("invalid world specification: {0}")]
    InvalidWorld(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
