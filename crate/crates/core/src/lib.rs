//! Nonmonotonic entailment for thresholded generalizations `α ⇒^k β`.
//!
//! * [`logic`]: propositions over a signature, stored as atom sets.
//! * [`engine`]: the exception-depth decision procedure.
//! * [`semantics`]: polytopes of probability models, a hit-and-run sampler
//!   and a quantile-scaling check of engine verdicts.
//! * [`zplus`]: translation to and from System-Z⁺ default rules.
//! * [`format`]: the knowledge-base and Z⁺ rule file formats.
//! * [`cli`]: command implementations behind the `tgl` binary.

pub mod cli;
pub mod engine;
pub mod format;
pub mod logic;
pub mod semantics;
pub mod zplus;

pub use engine::{
    compile, Depth, DepthProfile, EngineError, KnowledgeBase, QueryOutcome, Threshold,
    ThresholdedGeneralization,
};
pub use logic::{AtomSet, Expr, LogicError, ParseError, Proposition, Signature};
