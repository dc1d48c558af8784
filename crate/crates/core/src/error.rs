use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-exact division: {0}")]
    NonExactDivision(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("no certificate found within bounds\n{trace}")]
    NoCertificate { trace: String },
    #[error("numeric check inconclusive: {0}")]
    Inconclusive(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
