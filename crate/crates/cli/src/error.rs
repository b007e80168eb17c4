use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::CheckFailed(_) => 1,
            Self::ConfigParse(_) => 2,
            Self::Io(_) => 3,
        }
    }
}

impl From<susy_calogero::Error> for CliError {
    fn from(e: susy_calogero::Error) -> Self {
        Self::ConfigParse(e.to_string())
    }
}
