use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode index must be >= 1, got {0}")]
    ZeroMode(usize),

    #[error("radius {0} outside (0, 1]")]
    RadiusOutOfRange(f64),

    #[error("quadrature with M = {grid_points} supports at most {capacity} modes, {requested} requested")]
    Capacity {
        grid_points: usize,
        capacity: usize,
        requested: usize,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integrator produced a non-finite state at t = {time} (step {step})")]
    IntegratorAbort { time: f64, step: usize },

    #[error("sample {index}: {source}")]
    Sample {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Picard iteration did not contract; successive differences {diffs:?}")]
    NonContraction { diffs: Vec<f64> },

    #[error("energy drift {drift:e} exceeds guard {limit:e}")]
    EnergyDrift { drift: f64, limit: f64 },

    #[error("config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
