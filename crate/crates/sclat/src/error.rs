use thiserror::Error;

/// Errors produced by lattice construction, operations and decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ill-formed input: {0}")]
    IllFormed(String),

    #[error("elements belong to different base posets")]
    BaseMismatch,

    #[error("ingestion error: {law} violated{}", witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default())]
    Ingestion {
        law: String,
        witness: Option<String>,
    },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("not a primitive tuple: condition {condition} fails: {detail}")]
    NotPrimitive { condition: String, detail: String },

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("semantic error: {0}")]
    Semantic(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
