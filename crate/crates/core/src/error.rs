use thiserror::Error;

/// Errors produced across the processing chain.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid radar configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of bounds: {0}")]
    Bounds(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: u64, message: String },

    #[error("no target found: {0}")]
    NoTarget(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("lag out of range: {0}")]
    Range(String),

    #[error("empty series: {0}")]
    EmptySeries(String),

    #[error("series do not overlap in time")]
    NoOverlap,

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of the underlying reader or writer, as opposed to
    /// malformed content.
    pub fn is_io(&self) -> bool {
        match self {
            Error::Io(_) => true,
            Error::Csv(e) => matches!(e.kind(), csv::ErrorKind::Io(_)),
            _ => false,
        }
    }

    pub(crate) fn format(offset: u64, message: impl Into<String>) -> Self {
        Error::Format {
            offset,
            message: message.into(),
        }
    }
}
