use qham_core::QhamError;

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER_ABORT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver abort: {0}")]
    SolverAbort(QhamError),
    #[error(transparent)]
    Core(QhamError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::SolverAbort(_) => EXIT_SOLVER_ABORT,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAIL,
        }
    }
}

impl From<QhamError> for CliError {
    fn from(e: QhamError) -> Self {
        match e {
            QhamError::SolverAbort { .. } => CliError::SolverAbort(e),
            QhamError::Unsupported(_)
            | QhamError::InvalidSpace(_)
            | QhamError::InvalidAlcovePoint(_)
            | QhamError::RankTooSmall(_) => CliError::Config(e.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}
