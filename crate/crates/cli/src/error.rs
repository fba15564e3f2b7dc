use std::io;
use std::process::ExitCode;

use hyperdist::laws::LawError;
use hyperdist::{Error, ParseError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("cannot read `{path}`: {source}")]
    Io { path: String, source: io::Error },
    #[error("{kind} `{name}` is not declared in the workspace")]
    Missing { kind: &'static str, name: String },
    #[error("{0}")]
    Usage(String),
    #[error("undetermined: {0}")]
    Undetermined(Error),
    #[error(transparent)]
    Laws(#[from] LawError),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Domain(_) => 1,
            CliError::Laws(LawError::Domain(_) | LawError::NotApplicable) => 1,
            CliError::Undetermined(_) => 3,
            _ => 2,
        })
    }
}
