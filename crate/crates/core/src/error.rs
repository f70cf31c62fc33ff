use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),

    #[error("Gamma({0}) overflows f64")]
    Overflow(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("hypergeometric series diverges: {0}")]
    Divergent(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("{what} must be positive at grid index {index} (value {value})")]
    Positivity {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("variation must vanish at both endpoints (h[{index}] = {value})")]
    Boundary { index: usize, value: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("field file: {0}")]
    FieldFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
