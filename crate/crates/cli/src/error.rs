use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit 2).
    Config { field: String, message: String },
    /// The engine rejected or failed a computation (exit 3).
    Engine(chernoff_core::Error),
    /// Reading or writing a file failed (exit 3 on output, 2 on the config itself).
    Io {
        path: String,
        source: std::io::Error,
        config: bool,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { config: true, .. } => 2,
            CliError::Engine(_) | CliError::Io { config: false, .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { field, message } => {
                write!(f, "config error in `{field}`: {message}")
            }
            CliError::Engine(e) => write!(f, "engine error: {e}"),
            CliError::Io { path, source, .. } => write!(f, "{path}: {source}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<chernoff_core::Error> for CliError {
    fn from(e: chernoff_core::Error) -> Self {
        CliError::Engine(e)
    }
}

/// Tags an engine error raised while building objects from the config as a config error.
pub(crate) trait ConfigField<T> {
    fn field(self, name: &str) -> Result<T, CliError>;
}

impl<T> ConfigField<T> for chernoff_core::Result<T> {
    fn field(self, name: &str) -> Result<T, CliError> {
        self.map_err(|e| CliError::config(name, e))
    }
}
