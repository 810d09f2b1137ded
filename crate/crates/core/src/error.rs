use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument order: {0}")]
    ArgumentOrder(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("value {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A search exceeded its budget; `lower_bound` is the best bound established so far.
    #[error("resource limit: {what} (lower bound {lower_bound})")]
    ResourceLimit { what: String, lower_bound: u64 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
