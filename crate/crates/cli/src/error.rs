use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] jacverify::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(jacverify::Error::Verification(_) | jacverify::Error::Internal(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Json(_) | CliError::Io { .. } => 1,
        }
    }
}
