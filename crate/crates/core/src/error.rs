use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid joint support: {0}")]
    InvalidSupport(String),

    #[error("no support tuple matches the conditioning context")]
    ZeroProbabilityContext,

    #[error("target informant {0} is also in the conditioning set")]
    IndexOverlap(usize),

    #[error("informant index {index} out of range for {count} informants")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("invalid conditioning context: {0}")]
    InvalidContext(String),

    #[error("schedule {0:?} is not a permutation of the informant indices")]
    InvalidSchedule(Vec<usize>),

    #[error("truth tuple {0:?} is not in the support")]
    TruthOutsideSupport(Vec<u32>),

    #[error("{count} informants exceeds the exhaustive-search cap of {cap}")]
    TooLarge { count: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid energy parameters: {0}")]
    InvalidEnergy(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed transcript: {0}")]
    Transcript(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
