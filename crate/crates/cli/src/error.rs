use std::io;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid sweep: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Core(#[from] mistrust::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for anything the caller can fix by changing flags, 1 otherwise.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::InvalidSpec(_) => ExitCode::from(2),
            CliError::Core(
                mistrust::Error::UnknownStrategy { .. } | mistrust::Error::InvalidStrategy(_),
            ) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}
