use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("matrix kind mismatch: {0}")]
    KindMismatch(String),
    #[error("matrix is effectively zero")]
    ZeroMatrix,
    #[error("eigensolver failed to converge: {0}")]
    NoConvergence(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("growth class not representable: {0}")]
    Unrepresentable(String),
    #[error("simulator config: {0}")]
    Config(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
