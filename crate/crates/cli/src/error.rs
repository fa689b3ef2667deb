//! Exit codes and the JSON error document written to stderr.

use std::path::{Path, PathBuf};

use breathradar::Error;
use serde::Serialize;

pub const EXIT_ESTIMATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_PARAMS: i32 = 4;

#[derive(Debug, Serialize)]
pub struct CliError {
    #[serde(skip)]
    pub code: i32,
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl CliError {
    pub fn params(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARAMS,
            error: "invalid_parameters",
            message: message.into(),
            path: None,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            error: "usage",
            ..Self::params(message)
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: EXIT_IO,
            error: "io",
            message: err.to_string(),
            path: Some(path.to_path_buf()),
        }
    }

    pub fn at(mut self, path: &Path) -> Self {
        if self.path.is_none() {
            self.path = Some(path.to_path_buf());
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.error))
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let (code, kind) = match &err {
            e if e.is_io() => (EXIT_IO, "io"),
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Format { .. } => (EXIT_FORMAT, "format"),
            Error::InvalidConfig(_)
            | Error::InvalidParameter(_)
            | Error::Bounds(_)
            | Error::DimensionMismatch(_)
            | Error::UnknownFormat(_) => (EXIT_PARAMS, "invalid_parameters"),
            Error::NoTarget(_)
            | Error::UndefinedCorrelation(_)
            | Error::Range(_)
            | Error::EmptySeries(_)
            | Error::NoOverlap => (EXIT_ESTIMATION, "estimation"),
        };
        Self {
            code,
            error: kind,
            message: err.to_string(),
            path: None,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err).into()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
