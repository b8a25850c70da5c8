use thiserror::Error;

/// Errors surfaced by the CLI layer.
#[derive(Debug, Error)]
pub enum CliError {
    /// A flag or config value failed validation.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("config file: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(exec_hyper::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        CliError::Validation { field: field.to_string(), message: message.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation { .. } => "validation",
            CliError::Config(_) => "config",
            CliError::Solver(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    /// Process exit status: 2 for bad input, 1 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Config(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<exec_hyper::Error> for CliError {
    fn from(e: exec_hyper::Error) -> Self {
        match e {
            exec_hyper::Error::InvalidParameter { name, value, reason } => {
                CliError::validation(name, format!("{value} {reason}"))
            }
            other => CliError::Solver(other),
        }
    }
}
