use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or arguments.
    #[error("usage: {0}")]
    Usage(String),
    /// Input files that are missing, malformed or fail validation.
    #[error("data: {0}")]
    Data(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<logitkit::Error> for CliError {
    fn from(e: logitkit::Error) -> Self {
        match e {
            logitkit::Error::InvalidSelection(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}
