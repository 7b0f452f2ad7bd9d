use thiserror::Error;

/// Failure of one invocation, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, configuration or I/O (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Inputs outside the physical domain or an infeasible request (exit 2).
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }
}

impl From<trcov::Error> for CliError {
    fn from(e: trcov::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
