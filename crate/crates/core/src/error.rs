use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("{unparseable} of {rows} rows unparseable, above tolerance {tolerance}")]
    TooManyUnparseable {
        unparseable: usize,
        rows: usize,
        tolerance: f64,
    },

    #[error("non-increasing timestamps at row {row}: {previous} followed by {current}")]
    NonIncreasingTimestamps { row: usize, previous: i64, current: i64 },

    #[error("series is empty")]
    EmptySeries,

    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },

    #[error("samples have zero variance")]
    ZeroVariance,

    #[error("invalid bandwidth {0}")]
    InvalidBandwidth(f64),

    #[error("grid size {0} is below the minimum of 16")]
    GridTooSmall(usize),

    #[error("entropy power out of range for H = {0} nats")]
    EntropyPowerOverflow(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("no bracketing root for the plug-in bandwidth equation")]
    BandwidthSolve,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
