use std::io;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid state: {0}")]
    Validation(String),
    #[error("internal contract violation: {0}")]
    Contract(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    /// 2 mirrors clap's own usage errors.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Contract(_) => 4,
        })
    }
}

impl From<vqb_core::Error> for CliError {
    fn from(e: vqb_core::Error) -> Self {
        if e.is_contract_violation() {
            CliError::Contract(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Contract(format!("serialization failed: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
