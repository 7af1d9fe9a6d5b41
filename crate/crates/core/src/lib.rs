//! Bigraphical reactive systems encoded as multi-set rewriting.
//!
//! A bigraph is translated into a multiset of relational atoms; nine
//! rewrite rules consume a valid encoding down to the empty multiset; a
//! reaction rule is either applied directly on the bigraph or compiled into a
//! staged rewrite program that produces the same successors.

pub mod bigraph;
pub mod brsfile;
pub mod ccs;
pub mod mset;
pub mod par;
pub mod reaction;
pub mod relational;

pub use bigraph::{Bigraph, Control, Interface, Signature};
pub use mset::{Atom, Engine, Multiset, RewriteRule};
