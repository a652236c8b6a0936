use std::path::PathBuf;

use qext_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error(transparent)]
    Core(CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CapExceeded { .. } | CoreError::SizeExceeded { .. } | CoreError::Overflow => {
                CliError::Cap(e.to_string())
            }
            CoreError::OutsideValidityRegion(_) | CoreError::Parse(_) | CoreError::NonPrime(_) => {
                CliError::Config(e.to_string())
            }
            e => CliError::Core(e),
        }
    }
}

impl CliError {
    /// 1 for failed computations, 2 for caps, 3 for configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::Cap(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
