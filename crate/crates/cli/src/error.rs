use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] qphase::Error),
}

impl CliError {
    /// 0 success, 1 verification failure, 2 usage error, 3 I/O error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Input { .. } => 3,
            CliError::Core(e) => match e {
                qphase::Error::Io(_) | qphase::Error::Json(_) | qphase::Error::Format(_) => 3,
                _ => 2,
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub(crate) fn input(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        CliError::Input { path: path.into(), message: message.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
