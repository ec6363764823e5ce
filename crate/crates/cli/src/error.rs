use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("model error: {0}")]
    Model(#[from] dlmodel::Error),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl HarnessError {
    /// Process exit code: 2 configuration, 3 model, 4 certification, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Model(dlmodel::Error::Configuration(_)) => 2,
            HarnessError::Model(_) => 3,
            HarnessError::Certification(_) => 4,
            HarnessError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }
}

pub type HarnessResult<T> = std::result::Result<T, HarnessError>;

pub(crate) fn config<T>(msg: impl Into<String>) -> HarnessResult<T> {
    Err(HarnessError::Config(msg.into()))
}
