use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid space descriptor: {0}")]
    InvalidSpace(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("smooth space has a continuum of extreme points")]
    SmoothSpaceHasContinuumExtremes,
    #[error("nested sup-sum depth exceeds {0}")]
    DepthExceeded(usize),
    #[error("expected a unit vector, norm is {0}")]
    NotUnit(f64),
    #[error("epsilon must lie in [0, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("vectors are parallel")]
    Parallel,
    #[error("unsupported operator pair: {0}")]
    UnsupportedPair(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("counterexample search exhausted {0} rounds without a witness")]
    SearchExhausted(usize),
    #[error("unknown theorem suite: {0}")]
    UnknownSuite(String),
    #[error("constructed witness failed re-verification: {0}")]
    WitnessRejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
