use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension n = {n} outside supported range 1..={max}")]
    Dimension { n: usize, max: usize },

    #[error("point index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("coordinate {coord} out of range 1..={n}")]
    Coordinate { coord: usize, n: usize },

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("crossover probability {0} outside [0, 1/2]")]
    Alpha(f64),

    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("negative value {value} at index {index}")]
    Negative { index: usize, value: f64 },

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("density has mean {0}, expected 1")]
    NotNormalized(f64),

    #[error("argument outside feasible range: {0}")]
    Infeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{usable} usable points, a fit needs at least 4")]
    TooFewPoints { usable: usize },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
