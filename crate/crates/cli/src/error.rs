use thiserror::Error;

use triconfig::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("resource cap: {0}")]
    Cap(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::InvalidParameter { .. } | CoreError::DegenerateTriangle { .. } | CoreError::Parse { .. } | CoreError::Io(_) => {
                CliError::Config(msg)
            }
            CoreError::ResourceCap { .. } => CliError::Cap(msg),
            CoreError::CoincidentAtoms { .. }
            | CoreError::NotAdaptable { .. }
            | CoreError::InsufficientSamples(_)
            | CoreError::Numeric(_) => CliError::Numeric(msg),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
