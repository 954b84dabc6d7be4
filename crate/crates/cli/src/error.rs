use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed config: {0}")]
    ConfigParse(String),
    #[error("experiment `{experiment}`, field `{field}`: {message}")]
    ConfigSemantic { experiment: String, field: String, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigParse(_) | CliError::ConfigSemantic { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}
