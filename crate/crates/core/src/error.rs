use thiserror::Error;

use crate::tangle::{ConwayNotation, ExtFraction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TangleError {
    #[error("empty notation")]
    Empty,
    #[error("zero entry at position {position}")]
    ZeroEntry { position: usize },
    #[error("malformed token {token:?} at position {position}")]
    BadToken { token: String, position: usize },
    #[error("0/0 is not an extended rational")]
    Indeterminate,
    #[error("integer overflow in continued fraction")]
    Overflow,
    #[error("degenerate tangle (fraction {0}): closure is a trivial knot or link")]
    Degenerate(ExtFraction),
    #[error("fraction {0} lies strictly between -1 and 1 and has no same-sign continued fraction")]
    NoSameSignForm(ExtFraction),
    #[error("notation ({0}) is not in normal form; normalize it first")]
    NotNormal(ConwayNotation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("state sum over {crossings} crossings exceeds the budget of {budget}")]
    Budget { crossings: usize, budget: usize },
    #[error("malformed PD code: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("width must be positive")]
    Width,
    #[error("epsilon {eps} outside (0, {max}]")]
    Epsilon { eps: String, max: String },
    #[error("integer ribbon needs a negative twist count, got {0}")]
    Twist(i64),
    #[error("construction error: {0}")]
    Construction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Tangle(#[from] TangleError),
    #[error("extraction failed: {0}")]
    Extraction(String),
}
