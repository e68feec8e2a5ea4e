use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based when known.
    #[error("parse error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Nothing left to work with after tokenization and stopword removal.
    #[error("no mention found in {0:?}")]
    NoMention(String),

    #[error("remote service error: {0}")]
    Remote(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        Error::Parse { line: line.into(), message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
