use std::fmt;
use std::path::{Path, PathBuf};

/// Failure of a command, carrying the exit status it maps to.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad invocation: unknown flags, conflicting options, malformed config.
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A data file that does not match its schema.
    #[error("{path}: {message}")]
    Schema { path: PathBuf, message: String },
    /// Inputs were readable but the analysis could not be carried out.
    #[error("{0}")]
    Analysis(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn schema(path: &Path, message: impl fmt::Display) -> Self {
        Error::Schema {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    pub fn analysis(message: impl fmt::Display) -> Self {
        Error::Analysis(message.to_string())
    }

    /// 2 for usage and configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            _ => 1,
        }
    }

    /// Short tag used in the one-line diagnostic.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Usage(_) => "usage",
            Error::Io { .. } => "io",
            Error::Schema { .. } => "schema",
            Error::Analysis(_) => "analysis",
        }
    }

    /// `qualimeter: error[kind]: message` on a single line.
    pub fn diagnostic(&self) -> String {
        let msg = self.to_string().replace('\n', " ");
        format!("qualimeter: error[{}]: {msg}", self.kind())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
