use std::io;
use std::path::PathBuf;

/// Errors surfaced by streams, partitioning passes and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("i/o error on {path} at byte offset {offset}: {source}")]
    IoAt {
        path: PathBuf,
        offset: u64,
        #[source]
        source: io::Error,
    },

    /// File length is not a whole number of records; `offset` is where the
    /// truncated record starts.
    #[error("truncated record at byte offset {offset} in {path} (file length {len})")]
    TruncatedRecord {
        path: PathBuf,
        offset: u64,
        len: u64,
    },

    #[error("vertex id {id} exceeds declared maximum {max}")]
    VertexOutOfRange { id: u32, max: u32 },

    #[error("partition id {partition} out of range for k = {k}")]
    PartitionOutOfRange { partition: u32, k: u32 },

    #[error("invalid config: {field}: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("bad ascii edge list at {path}:{line}: {reason}")]
    AsciiParse {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    /// Internal bookkeeping mismatch while assembling the output file.
    #[error("assignment output incomplete: {detail}")]
    IncompleteAssignment { detail: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn invalid_config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
