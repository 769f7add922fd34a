use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or argument values; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// I/O or other runtime failure; exit code 1.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<takagi_core::Error> for CliError {
    fn from(e: takagi_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
