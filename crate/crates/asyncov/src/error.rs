use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] asyncov_core::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: u64, msg: String },

    #[error("{path}:{line}: timestamp {time} not after previous {previous}")]
    NonMonotoneLine { path: PathBuf, line: u64, time: f64, previous: f64 },

    #[error("{path}: {source}")]
    Series { path: PathBuf, source: asyncov_core::Error },

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Usage(String),

    #[error("writing output: {0}")]
    Output(String),
}

impl AppError {
    /// Code printed in `error[CODE]: ...` lines.
    pub fn code(&self) -> &'static str {
        match self {
            AppError::Core(e) | AppError::Series { source: e, .. } => e.code(),
            AppError::Io { .. } => "E_IO",
            AppError::Parse { .. } => "E_PARSE",
            AppError::NonMonotoneLine { .. } => "E_NON_MONOTONE",
            AppError::Config(_) => "E_CONFIG",
            AppError::Usage(_) => "E_USAGE",
            AppError::Output(_) => "E_OUTPUT",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }
}

impl From<csv::Error> for AppError {
    fn from(e: csv::Error) -> Self {
        AppError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Output(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Output(e.to_string())
    }
}

pub type AppResult<T> = Result<T, AppError>;
