//! Multiset rewriting kernel: terms, atoms, guarded rules with fresh-name
//! binders, matching, strategies and replayable traces.

mod atom;
mod engine;
mod pattern;
mod term;
pub mod text;
mod trace;

pub use atom::{Atom, Multiset};
pub use engine::{has_match, match_rule, Candidate, Chooser, Engine, Match, Strategy};
pub use pattern::{AtomPat, Guard, Pat, RewriteRule, Substitution};
pub use term::{ctor, Name, Namespace, Nat, Sym, Term};
pub use trace::{Outcome, Step, Trace};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("rule {label}: {reason}")]
    BadRule { label: String, reason: String },
    #[error("rule {0}: match is stale, its atoms are no longer in the state")]
    StaleMatch(String),
    #[error("rule {0}: match does not instantiate this rule's left-hand side")]
    ForeignMatch(String),
    #[error("rule {label}: right-hand pattern {pattern} has unbound variables")]
    Unbound { label: String, pattern: String },
    #[error("replay failed: {0}")]
    Replay(String),
    #[error("step budget of {0} exhausted")]
    FuelExhausted(usize),
}
