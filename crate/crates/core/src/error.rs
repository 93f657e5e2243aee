use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{source_name}:{line}: invalid UTF-8")]
    Encoding { source_name: String, line: usize },

    #[error("{source_name}:{line}{}: {message}", column.map(|c| format!(":{c}")).unwrap_or_default())]
    Parse {
        source_name: String,
        line: usize,
        column: Option<usize>,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("numerical error: {0}")]
    NonFinite(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_owned(),
            line,
            column: None,
            message: message.into(),
        }
    }

    pub(crate) fn parse_at(
        source_name: &str,
        line: usize,
        column: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            source_name: source_name.to_owned(),
            line,
            column: Some(column),
            message: message.into(),
        }
    }
}
