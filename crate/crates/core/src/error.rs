use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed game document: {0}")]
    MalformedDocument(String),
    #[error("ragged tensor: {0}")]
    RaggedTensor(String),
    #[error("duplicate action label {label:?} for player {player}")]
    DuplicateLabel { player: usize, label: String },
    #[error("invalid rational literal {0:?}")]
    InvalidRational(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
    #[error("out of bounds: {0}")]
    OutOfBounds(String),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("budget exceeded: {candidates} candidates over budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },
    #[error("candidate is not a curb set")]
    NotCurb,
    #[error("candidate is not an equilibrium cycle")]
    NotAnEc,
    #[error("operation requires exactly two players, game has {0}")]
    NotTwoPlayers(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("action out of range: {0}")]
    OutOfRange(String),
    #[error("utility not exactly representable: {0}")]
    Inexact(String),
    #[error("bracketing failed: {0}")]
    Bracketing(String),
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("unknown node in highlight: {0}")]
    UnknownNode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
