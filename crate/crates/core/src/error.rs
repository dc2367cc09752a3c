use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("invalid qunit definition `{id}`: {message}")]
    Definition { id: String, message: String },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("{0}")]
    Invalid(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn definition(id: &str, message: impl Into<String>) -> Self {
        Error::Definition {
            id: id.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// Short failure class used for CLI diagnostics.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Schema(_) | Error::Integrity(_) | Error::Definition { .. } => "integrity",
            Error::NotFound(_) => "not-found",
            Error::Invalid(_) => "invalid",
            Error::Io { .. } => "io",
        }
    }
}
