use std::fmt;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, an invalid model or an unusable output path: exit 2.
    Usage(String),
    /// A computation could not be resolved: exit 3.
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<quasispec::Error> for CliError {
    fn from(e: quasispec::Error) -> Self {
        use quasispec::Error::*;
        match e {
            Resolution(_) | Overflow(_) | Backend(_) | Contaminated { .. } | Certificate(_) | Consistency(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("cannot write output: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
