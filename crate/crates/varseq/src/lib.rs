//! IO, file formats, CLI, and the empirical verification harness for
//! [`varseq_core`].

use std::fmt;

pub mod cli;
pub mod config;
pub mod formats;
pub mod harness;

pub use varseq_core::{CoreError, ExponentSequence, Grid, Seq, Weight};

/// Application-level error with the CLI exit-code contract attached:
/// input/usage problems exit with 2, verification failures with 1.
#[derive(Debug)]
pub enum AppError {
    /// Malformed input or usage (exit code 2).
    Input(String),
}

impl AppError {
    pub fn input(msg: String) -> Self {
        AppError::Input(msg)
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Input(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        AppError::Input(e.to_string())
    }
}
