use std::path::PathBuf;

use hmts_core::{CampaignError, ParamError, TableError};

/// Everything that can go wrong outside the numerical core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: u64,
        msg: String,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{context}: {source}")]
    Table {
        context: String,
        #[source]
        source: TableError,
    },
    #[error("{context}: {source}")]
    Param {
        context: String,
        #[source]
        source: ParamError,
    },
    #[error(transparent)]
    Campaign(#[from] CampaignError),
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("threshold table has {0} hard error(s)")]
    Invalid(usize),
}

impl Error {
    /// Process exit code: 1 for bad input, 2 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Csv(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn parse(source_name: &str, line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_owned(),
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
