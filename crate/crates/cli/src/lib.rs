//! Configuration, dispatch and report writing for the `chevcalc` binary.

pub mod config;
pub mod report;
pub mod run;
pub mod scenarios;

use thiserror::Error;

pub use config::{Command, ExperimentConfig, Format, RepChoice, DEFAULT_SEED};
pub use report::{fingerprint, run, write_atomic, RunReport, SCHEMA};
pub use scenarios::{catalog, select, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("verification failed: {0}")]
    Failure(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::CapExceeded(_) => 3,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            CliError::Failure(_) => "verification-failure",
            CliError::Config(_) | CliError::Io(_) => "config-error",
            CliError::CapExceeded(_) => "cap-exceeded",
        }
    }
}
