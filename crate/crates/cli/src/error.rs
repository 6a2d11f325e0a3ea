use std::path::Path;

use thiserror::Error;

/// A failed invocation, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations.
    #[error("usage: {0}")]
    Usage(String),
    /// An input file could not be read or violates a state invariant.
    #[error("invalid input: {0}")]
    Input(String),
    /// The report could not be written.
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Input(_) | Self::Output(_) => 3,
        }
    }

    pub fn usage(flag: &str, err: impl std::fmt::Display) -> Self {
        Self::Usage(format!("{flag}: {err}"))
    }

    pub fn input(path: &Path, err: impl std::fmt::Display) -> Self {
        Self::Input(format!("{}: {err}", path.display()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
