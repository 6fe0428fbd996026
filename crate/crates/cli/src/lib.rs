//! Library surface of the radop experiment runner: configuration loading,
//! suite orchestration, and the verification-report bundle format.

pub mod config;
pub mod report;
pub mod suites;
pub mod table;

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bundle error: {0}")]
    Bundle(String),

    #[error("numerical kernel error: {0}")]
    Kernel(#[from] radop::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}
