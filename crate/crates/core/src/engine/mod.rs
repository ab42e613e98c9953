//! Depth entailment: compile a knowledge base into its exception chain and
//! answer consistency, rarity and entailment-in-probability queries.

mod depth;
mod kb;
mod profile;

use thiserror::Error;

use crate::logic::{LogicError, ParseError};

pub use depth::{Depth, Threshold};
pub use kb::{KnowledgeBase, ThresholdedGeneralization};
pub use profile::{compile, DepthProfile, QueryOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("threshold must be a positive integer or `inf`")]
    ZeroThreshold,
    #[error("`{0}` is not a depth (expected a non-negative integer or `inf`)")]
    BadDepth(String),
    #[error("rule or query is over a different signature than the knowledge base")]
    SignatureMismatch,
    #[error("exception chain did not reach its fixpoint within {cap} steps")]
    IterationCap { cap: usize },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

impl From<ParseError> for EngineError {
    fn from(e: ParseError) -> Self {
        EngineError::Logic(LogicError::Parse(e))
    }
}
