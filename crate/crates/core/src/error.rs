use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("input is not valid UTF-8")]
    NotUtf8,

    #[error("unknown input format {0:?} (expected csv or jsonl)")]
    UnknownFormat(String),

    #[error("unexpected header: {0}")]
    BadHeader(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid court model: {0}")]
    InvalidCourt(String),

    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("zones {0} and {1} do not form an inner/outer pair")]
    MismatchedZones(String, String),

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("degenerate_point_set: all points coincide")]
    DegeneratePointSet,

    #[error("degenerate scale range: r1={r1} r2={r2}")]
    DegenerateScaleRange { r1: f64, r2: f64 },

    #[error("insufficient_scaling_range: {usable} usable radii, need 3")]
    InsufficientScalingRange { usable: usize },

    #[error("too many failed trials: {failed} of {trials}")]
    TooManyFailedTrials { failed: usize, trials: usize },

    #[error("zero attempts")]
    ZeroAttempts,

    #[error("too few attempts: {got} (need {need})")]
    TooFewAttempts { need: u64, got: u64 },

    #[error("field goal percentage inside is zero; ratio undefined")]
    ZeroInsideFgp,

    #[error("no shots in range [{lo}, {hi})")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Errors caused by bad configuration or parameters rather than bad data.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::InvalidCourt(_)
                | Error::InvalidParameter(_)
                | Error::UnknownFormat(_)
        )
    }
}
