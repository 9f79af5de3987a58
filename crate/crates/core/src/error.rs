//! Error type shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value lies outside the domain of the divergence generator in use.
    #[error("{family}: value {value} is not {requirement} ({location})")]
    Domain {
        family: &'static str,
        value: f64,
        requirement: &'static str,
        location: String,
    },

    /// Power-mean exponents must be nonzero and at most 1.
    #[error("power mean exponent must be nonzero and <= 1, got s = {s}")]
    InvalidExponent { s: f64 },

    #[error("invalid annealing schedule: {0}")]
    InvalidSchedule(String),

    #[error("k must satisfy 1 <= k <= n, got k = {k} with n = {n}")]
    InvalidK { k: usize, n: usize },

    /// A soft-assignment weight column summed below the underflow floor.
    #[error("cluster {cluster} received a vanishing weight column")]
    DegenerateCluster { cluster: usize },

    #[error("label vectors have different lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("centroid sets have different shapes: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("invalid mixture spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no rows remain after filtering")]
    EmptyAfterFilter,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
