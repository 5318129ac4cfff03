use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input; `pos` is a byte offset into the text that was parsed.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Core(#[from] nicensus_core::Error),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn parse_err(pos: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { pos, msg: msg.into() }
}
