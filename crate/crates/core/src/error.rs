use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("zone mismatch: {0} vs {1}")]
    ZoneMismatch(crate::geo::Zone, crate::geo::Zone),

    #[error("unsupported region: latitude {0} is outside the UTM band (|lat| < 84)")]
    UnsupportedRegion(f64),

    #[error("invalid resample plan: {0}")]
    Plan(String),

    #[error(
        "degenerate center cloud: every resample is the full sample (n = N without replacement), \
         the rank test is undefined"
    )]
    DegenerateCloud,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
