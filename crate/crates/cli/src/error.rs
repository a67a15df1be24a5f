use std::path::PathBuf;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    /// I/O failures and other runtime errors.
    pub const RUNTIME: u8 = 1;
    /// Bad command-line usage (reported by the argument parser).
    pub const USAGE: u8 = 2;
    /// Malformed input files.
    pub const PARSE: u8 = 3;
    /// Well-formed input that violates a model or parameter constraint.
    pub const VALIDATION: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] resolv_core::Error),
    #[error("{path}: malformed JSON: {message}")]
    ConfigSyntax { path: PathBuf, message: String },
    #[error("{path}: invalid model config: {message}")]
    ConfigSchema { path: PathBuf, message: String },
    #[error("invalid value for {flag}: {reason}")]
    Argument { flag: &'static str, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn argument(flag: &'static str, reason: impl Into<String>) -> Self {
        CliError::Argument {
            flag,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use resolv_core::Error as E;
        match self {
            CliError::Core(E::Io { .. }) | CliError::Io { .. } | CliError::Encode(_) => {
                exit::RUNTIME
            }
            CliError::Core(E::Parse { .. } | E::CommunityFile(_) | E::EmptyInput(_))
            | CliError::ConfigSyntax { .. } => exit::PARSE,
            CliError::Core(_) | CliError::ConfigSchema { .. } | CliError::Argument { .. } => {
                exit::VALIDATION
            }
        }
    }
}
