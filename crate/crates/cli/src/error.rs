use thiserror::Error;

/// A failure with its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Input(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("tolerance check failed: {0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Input(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Tolerance(_) => 4,
        }
    }
}

impl From<linnik::Error> for CliError {
    fn from(e: linnik::Error) -> Self {
        use linnik::Error as E;
        match e {
            E::GuardExceeded(_) | E::LimitTooLarge(_) => CliError::Guard(e.to_string()),
            E::NumericalInstability(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            CliError::Input(format!("i/o: {e}"))
        } else if e.is_data() || e.is_syntax() || e.is_eof() {
            CliError::Input(format!("bad JSON: {e}"))
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
