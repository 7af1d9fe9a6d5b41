//! Reaction rules on bigraphs: redex matching, parameter instantiation,
//! direct application, compilation to staged rewrite programs, and
//! exploration of the resulting reactive system.

mod apply;
mod compile;
mod eta;
mod explore;
mod matching;
mod rule;

pub use apply::{apply_reaction, direct_successors};
pub use compile::{
    base_stage_rules, compile_reaction, copy_restore_rules, copy_stage_rules, kernel_step,
    kernel_successors, CompiledReaction, STAGE_LIMIT,
};
pub use eta::{instantiate_eta, observe_bigraph};
pub use explore::{
    run_brs, Brs, BrsTrace, ExploreStrategy, Picker, RunOutcome, StateSet, Successor, Transition, Via,
};
pub use matching::{find_matches, Decomposition, Occurrence};
pub use rule::{GroundReactionRule, ParametricReactionRule};

use thiserror::Error;

use crate::bigraph::BigraphError;
use crate::mset::KernelError;
use crate::relational::RelationalError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReactionError {
    #[error("rule {rule}: {reason}")]
    BadRule { rule: String, reason: String },
    #[error("decomposition for rule {0} does not recompose to the agent")]
    StaleDecomposition(String),
    #[error("parameter has the wrong shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Bigraph(#[from] BigraphError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Relational(#[from] RelationalError),
}
