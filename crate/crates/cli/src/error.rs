use cfshape_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("unit error: {0}")]
    Unit(String),

    #[error("numeric failure: {0}")]
    Numeric(Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParam { .. }
            | Error::MalformedNetwork(_)
            | Error::UnsupportedDelay { .. } => CliError::Config(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

impl CliError {
    /// 1 for configuration problems, 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Unit(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}
