use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulator and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid side length must be at least 2, got {0}")]
    GridTooSmall(usize),

    #[error("vertex ({x}, {y}) lies outside the {side}x{side} grid")]
    VertexOutOfRange { x: usize, y: usize, side: usize },

    #[error("geometry mismatch: {left}x{left} vs {right}x{right}")]
    GeometryMismatch { left: usize, right: usize },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeLength { got: usize, expected: usize },

    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("coin matrix is not unitary (max deviation {0:e})")]
    NonUnitaryCoin(f64),

    #[error("invalid potential parameters: {0}")]
    InvalidPotential(String),

    #[error("invalid window [{start}, {end}] for a series of length {len}")]
    InvalidWindow { start: usize, end: usize, len: usize },

    #[error("power-law fit: {0}")]
    Fit(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("no sigma in [{min}, {max}] satisfies the {criterion} criterion on L = {grid_side}")]
    ThresholdNotFound { grid_side: usize, criterion: String, min: f64, max: f64 },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config { key: String, line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by bad input rather than a failed computation.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Config { .. })
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
