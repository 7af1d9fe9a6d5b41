//! Relational model of bigraphs: the encoding `⟦B⟧`, the validity
//! rewrite system, the interpretation `⟦S⟧★` and the partition used by the
//! composition lemma.

mod encode;
mod interpret;
mod partition;
mod validity;

use thiserror::Error;

use crate::bigraph::Diagnostics;
use crate::mset::Sym;

pub use encode::{
    child_term, encode, encode_unchecked, encoding_size, link_term, parent_term, point_term,
};
pub use interpret::interpret;
pub use partition::{compose_encoding, eq_set, juxtapose_encoding, partition, Partition};
pub use validity::{
    check_valid, check_valid_batch, check_valid_with, normal_form_random, uniqueness_violations,
    validity_rules, Invalidity, ValidityReport,
};

/// Graph id used when the caller does not pick one.
pub const DEFAULT_GRAPH: &str = "B";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationalError {
    #[error("ill-formed bigraph: {0}")]
    IllFormed(Diagnostics),
    #[error("invalid multiset: {}", .0.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Invalidity>),
    #[error("port ({node},{index}) is inconsistent with its node")]
    InconsistentPort { node: Sym, index: u32 },
    #[error("malformed atom, {0}")]
    Malformed(String),
}
