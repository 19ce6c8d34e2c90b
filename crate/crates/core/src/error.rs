use std::fmt;

use thiserror::Error;

use crate::game::Diagnostic;

pub type Result<T, E = GameError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid instance: {}", join(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("bad window: {0}")]
    Window(String),
    #[error("syntax error at {0}")]
    Parse(ParseError),
    #[error("{0}")]
    Usage(String),
}

impl From<ParseError> for GameError {
    fn from(e: ParseError) -> Self {
        GameError::Parse(e)
    }
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn precondition(msg: impl Into<String>) -> GameError {
    GameError::Precondition(msg.into())
}
