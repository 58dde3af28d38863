//! Error type shared across the library.

use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by samplers, statistics, the trainer, and dataset I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on user-supplied input was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A level-restricted sampler ran out of drawable candidates before
    /// accepting a single point.
    #[error("sampler exhausted: {0}")]
    SamplerExhausted(String),

    /// A brute-force routine was asked to run beyond its enumeration guard.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Every principal minor of the kernel is (numerically) zero.
    #[error("degenerate kernel: {0}")]
    DegenerateKernel(String),

    /// A CSV dataset file does not conform to the schema.
    #[error("{}: line {line}: {msg}", path.display())]
    CsvFormat {
        path: PathBuf,
        /// 1-based line number within the file (the header is line 1).
        line: u64,
        msg: String,
    },

    /// An IDX file carries the wrong magic number.
    #[error("{}: bad magic number: expected {expected:#010x}, found {found:#010x}", path.display())]
    IdxMagic {
        path: PathBuf,
        expected: u32,
        found: u32,
    },

    /// An IDX file ended before the declared contents.
    #[error("{}: truncated IDX file: {msg}", path.display())]
    IdxTruncated { path: PathBuf, msg: String },

    /// IDX image and label files declare different item counts.
    #[error("IDX item count mismatch: {images} images vs {labels} labels")]
    IdxCountMismatch { images: usize, labels: usize },

    /// An I/O failure while reading or writing a file.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
