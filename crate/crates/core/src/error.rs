use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("missing required column `{0}`")]
    MissingColumn(&'static str),

    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),

    #[error("bar dated {date} has no `{field}` value")]
    MissingField { field: &'static str, date: NaiveDate },

    #[error("invalid window specification: {0}")]
    InvalidWindowSpec(String),

    #[error("window selects {0} observation(s); at least 2 are required")]
    EmptyWindow(usize),

    #[error("window size {size} exceeds the {available} available observations")]
    SizeExceedsData { size: usize, available: usize },

    #[error("series is empty")]
    EmptySeries,

    #[error("smoothing factor {0} is outside (0, 1)")]
    BadGamma(f64),

    #[error("{0} observation(s) given; at least 2 are required")]
    TooFewPoints(usize),

    #[error("operation requires a proper trapezoid (a0- <= a1- <= a1+ <= a0+)")]
    ImproperShape,

    #[error("membership level {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("window has no open/high/low prices")]
    MissingOhlc,

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
