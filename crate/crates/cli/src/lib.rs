//! Experiment runner library behind the `baro` binary: JSON configs,
//! seeded batch simulation on a worker pool, verification suites, sweeps,
//! and CSV/JSON report emission.

pub mod config;
pub mod report;
pub mod runner;
pub mod schema;
pub mod verify;

use std::fmt;
use std::path::Path;

/// Process exit codes: 0 success, 1 verification/invariant failure,
/// 2 usage or config error, 3 I/O failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Ok = 0,
    Failure = 1,
    Config = 2,
    Io = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError {
            exit: ExitCode::Config,
            message: msg.into(),
        }
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        CliError {
            exit: ExitCode::Failure,
            message: msg.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError {
            exit: ExitCode::Io,
            message: format!("{}: {err}", path.display()),
        }
    }

    pub fn from_core(err: baro_core::CoreError) -> Self {
        CliError {
            exit: ExitCode::Config,
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}
