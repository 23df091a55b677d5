use thiserror::Error;

use crate::measures::FkgViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} out of range (supported: {min}..={max})")]
    DimensionOutOfRange { n: usize, min: usize, max: usize },

    #[error("sets {0:?} and {1:?} are comparable, not an antichain")]
    NotAntichain(Vec<usize>, Vec<usize>),

    #[error("event is not up-closed")]
    NotIncreasing,

    #[error("point {point} does not fit in dimension {n}")]
    PointOutOfRange { point: u32, n: usize },

    #[error("operation requires a nonempty increasing event")]
    EmptyEvent,

    #[error("parameter p_{index} = {value} is degenerate (must lie strictly in (0,1))")]
    DegenerateParameter { index: usize, value: String },

    #[error("invalid probability {0}")]
    InvalidProbability(String),

    #[error("weights sum to {0}, expected 1")]
    NotNormalized(String),

    #[error("conditioning event has probability zero")]
    ZeroProbabilityCondition,

    #[error("measure violates the positive lattice condition: {0}")]
    NotFkg(Box<FkgViolation>),

    #[error("zero-probability histories of coordinate {coordinate} admit no monotone threshold fill")]
    MonotoneCompletionFailed { coordinate: usize },

    #[error("{m} underlying Bernoullis exceed the limit of {max}")]
    TooManyUnderlying { m: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
