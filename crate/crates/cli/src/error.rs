use causalsim::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    /// 2 for bad input, 3 for solver nonconvergence, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Domain(Error::NonConvergence { .. }) => 3,
            Self::Domain(
                Error::UnknownScenario(_) | Error::EmptyGrid | Error::OutOfRange(_) | Error::InvalidInstance(_),
            ) => 2,
            Self::Domain(_) | Self::Io(_) => 1,
        }
    }

    /// One line, `error[<code>]: <message>`.
    pub fn line(&self) -> String {
        let msg: String = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error[{}]: {msg}", self.exit_code())
    }
}
