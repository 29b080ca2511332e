//! Error taxonomy mapped onto process exit codes: 1 for validation problems,
//! 2 for runtime failures, 3 for I/O.

use thiserror::Error;

use crate::config::ConfigError;
use crate::svg::PlotError;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) | LabError::Validation(_) => 1,
            LabError::Runtime(_) | LabError::Plot(_) => 2,
            LabError::Io { .. } => 3,
        }
    }

    pub fn io(path: impl Into<String>) -> impl FnOnce(std::io::Error) -> LabError {
        let path = path.into();
        move |source| LabError::Io { path, source }
    }

    pub fn runtime(err: impl std::fmt::Display) -> LabError {
        LabError::Runtime(err.to_string())
    }
}
