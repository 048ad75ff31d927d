use std::io;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const SCHEMA: i32 = 2;
    pub const AMBIGUOUS_SUPPORT: i32 = 3;
    pub const RETRIES_EXHAUSTED: i32 = 4;
    pub const ORACLE_FAILURE: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error in {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tribasis::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("oracle check failed: {0}")]
    OracleFailure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema { .. } | CliError::Config(_) => exit::SCHEMA,
            CliError::Core(e) => match e {
                tribasis::Error::AmbiguousSupport { .. } => exit::AMBIGUOUS_SUPPORT,
                tribasis::Error::RetriesExhausted { .. } => exit::RETRIES_EXHAUSTED,
                tribasis::Error::UnsupportedDimension(_)
                | tribasis::Error::DimensionMismatch { .. }
                | tribasis::Error::InvalidParams(_)
                | tribasis::Error::InvalidCounts(_)
                | tribasis::Error::MissingRecord(_)
                | tribasis::Error::InvalidConfig(_)
                | tribasis::Error::ZeroVector
                | tribasis::Error::EnumerationTooLarge(_) => exit::SCHEMA,
                _ => exit::FAILURE,
            },
            CliError::Io { .. } | CliError::Csv(_) => exit::FAILURE,
            CliError::OracleFailure(_) => exit::ORACLE_FAILURE,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
