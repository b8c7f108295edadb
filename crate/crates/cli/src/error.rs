use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("manifest: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("resource cap {cap} = {limit} exceeded")]
    Cap { cap: &'static str, limit: String },

    #[error(transparent)]
    Core(#[from] thinlab_core::Error),
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Cap { .. } | CliError::Core(thinlab_core::Error::CapExceeded { .. }) => EXIT_CAP,
            CliError::Io { .. } => EXIT_PARTIAL,
            CliError::Schema(_) | CliError::Core(_) => EXIT_INVALID,
        }
    }
}
