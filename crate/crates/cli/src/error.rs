use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{operation} failed: {source}")]
    Numerical {
        operation: &'static str,
        #[source]
        source: abfringe::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical { .. } => 3,
            CliError::Io { .. } => 1,
        }
    }
}

/// Tags a core error with the operation that produced it.
pub(crate) trait Context<T> {
    fn during(self, operation: &'static str) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, abfringe::Error> {
    fn during(self, operation: &'static str) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerical { operation, source })
    }
}
