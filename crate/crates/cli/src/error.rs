use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Config { path: String, source: ConfigError },

    #[error("synthesis failed: {0}")]
    Synthesis(ste_core::Error),

    #[error("integration failed: {0}")]
    Integration(ste_core::Error),

    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },

    #[error("{context}: {source}")]
    Csv { context: String, source: csv::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Synthesis(_) => 2,
            CliError::Integration(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { context: context.into(), source }
    }

    pub(crate) fn csv(context: impl Into<String>, source: csv::Error) -> Self {
        CliError::Csv { context: context.into(), source }
    }
}

impl From<ste_core::Error> for CliError {
    fn from(e: ste_core::Error) -> Self {
        match e {
            e if e.is_synthesis() => CliError::Synthesis(e),
            e @ ste_core::Error::Integration { .. } => CliError::Integration(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}
