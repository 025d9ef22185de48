use std::fmt;

/// CLI-level failures, mapped onto process exit codes:
/// 2 invalid parameters, 3 capacity exceeded, 4 I/O failure.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Capacity(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Capacity(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn invalid(msg: impl fmt::Display) -> CliError {
        CliError::Invalid(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Capacity(m) | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<qcomposite::Error> for CliError {
    fn from(err: qcomposite::Error) -> CliError {
        match err {
            qcomposite::Error::CapacityExceeded(m) => CliError::Capacity(m),
            qcomposite::Error::InvalidParameters(m) | qcomposite::Error::Domain(m) => {
                CliError::Invalid(m)
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Io(err.to_string())
    }
}
