use std::path::PathBuf;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] rindler_core::Error),

    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    /// A computed column disagreed with its oracle beyond tolerance.
    #[error("numerical validation failed: {0}")]
    Validation(String),
}

impl CliError {
    /// 1 for usage and input errors, 2 for validation failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
