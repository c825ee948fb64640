//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown task `{0}`")]
    UnknownTask(String),

    #[error("{path}:{line}: {message}")]
    Dataset {
        path: String,
        line: usize,
        message: String,
    },

    #[error("empty question")]
    EmptyQuestion,

    #[error("strategy `{strategy}` does not support re-read variant {variant}")]
    InvalidCombination { strategy: String, variant: String },

    #[error("task `{0}` is not an arithmetic task")]
    NonArithmeticTask(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid strategy descriptor `{0}`")]
    Descriptor(String),

    #[error("provider `{provider}` failed: {message}")]
    Provider { provider: String, message: String },

    #[error("authentication rejected by provider: {0}")]
    Auth(String),

    #[error("retries exhausted after {attempts} attempts: {last_error}")]
    RetriesExhausted { attempts: u32, last_error: String },

    #[error("mock script has no entry for digest {digest} sample {sample_index}")]
    MockMiss { digest: String, sample_index: u32 },

    #[error("offline mode: {0}")]
    OfflineCacheMiss(String),

    #[error("empty input")]
    EmptyInput,

    #[error("records are not homogeneous: {0}")]
    Heterogeneous(String),

    #[error("no baseline records for `{baseline}` in task `{task}`")]
    MissingBaseline { baseline: String, task: String },

    #[error("no complexity-annotated records")]
    NoAnnotatedRecords,

    #[error("{0}")]
    Records(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
