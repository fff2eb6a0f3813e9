//! Command-line harness for `phasediscrim` experiments.
//!
//! The binary is a thin wrapper over [`commands`]; everything here is also
//! usable in-process, which is how the integration tests drive it.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod plot;

use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("simulation error: {0}")]
    Simulation(#[from] phasediscrim::Error),
}

impl CliError {
    pub fn io(context: impl std::fmt::Display, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }

    /// 1 for bad input, 3 for I/O failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 3,
            CliError::Config(_) | CliError::Schema(_) | CliError::Simulation(_) => 1,
        }
    }
}

impl From<CliError> for ExitCode {
    fn from(err: CliError) -> Self {
        ExitCode::from(err.exit_code())
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
pub mod book_cli {}
