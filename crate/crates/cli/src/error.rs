use std::path::PathBuf;

use bartnik_core::error::ErrorKind;
use thiserror::Error;

use crate::config::ConfigErrors;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Core(#[from] bartnik_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    /// A self-check against an independent value exceeded the tolerance.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    /// 1 config or I/O, 2 precondition, 3 solver, 4 extraction.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Precondition => 2,
                ErrorKind::Solver => 3,
                ErrorKind::Extraction => 4,
            },
            CliError::Check(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
