use thiserror::Error;

/// Errors raised by the geometry, measure, walk and statistics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("singular input: smallest singular value {smallest:e} below tolerance relative to {largest:e}")]
    SingularInput { smallest: f64, largest: f64 },
    #[error("eigenvalue iteration did not converge")]
    EigenFailure,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("operation is not supported for sampler measures: {0}")]
    UnsupportedForSampler(&'static str),
    #[error("overflow: non-finite entry in running product at step {step}")]
    Overflow { step: usize },
    #[error("insufficient samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },
    #[error("degenerate variance {sigma:e} although the measure is flagged with unbounded image")]
    DegenerateVariance { sigma: f64 },
    #[error("flag violation: {0}")]
    FlagViolation(&'static str),
    #[error("empty input")]
    EmptyInput,
    #[error("trial {index}: {source}")]
    Trial { index: usize, source: Box<Error> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
