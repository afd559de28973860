use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: line {line}: {reason}")]
    Parse {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("numeric singularity: {0}")]
    Singular(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] geofreq::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use geofreq::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Singular(_) => 4,
            CliError::Core(E::SingularMagnitude { .. }) => 4,
            CliError::Core(E::InvalidSpec(_) | E::InvalidGrid(_) | E::InvalidFrame(_)) => 2,
            CliError::Io { .. } | CliError::Csv(_) | CliError::Core(_) => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
