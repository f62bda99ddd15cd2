use thiserror::Error;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Usage(String),
    #[error("resource guard: {0}")]
    Guard(xxz_core::Error),
    #[error(transparent)]
    Core(xxz_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<xxz_core::Error> for CliError {
    fn from(e: xxz_core::Error) -> Self {
        use xxz_core::Error as E;
        match e {
            E::DimensionGuard { .. } => Self::Guard(e),
            E::InvalidParameter(_) | E::InvalidSector { .. } | E::ThetaOutOfZone { .. } => Self::Usage(e.to_string()),
            other => Self::Core(other),
        }
    }
}

impl CliError {
    /// 1 computation or verification failure, 2 usage, 3 resource guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Clap(e) if !e.use_stderr() => 0,
            Self::Clap(_) | Self::Usage(_) => 2,
            Self::Guard(_) => 3,
            Self::Core(_) | Self::Io { .. } => 1,
        }
    }
}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}
