#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use brs_core::bigraph::{lean_equiv, Bigraph};
use brs_core::ccs::CcsTerm;

const CHANNELS: [&str; 3] = ["a", "b", "c"];

fn prefix_over(k: BoxedStrategy<CcsTerm>) -> BoxedStrategy<CcsTerm> {
    (0..CHANNELS.len(), any::<bool>(), k)
        .prop_map(|(c, send, k)| {
            if send {
                CcsTerm::send(CHANNELS[c], k)
            } else {
                CcsTerm::get(CHANNELS[c], k)
            }
        })
        .boxed()
}

fn sum_of(p: BoxedStrategy<CcsTerm>) -> BoxedStrategy<CcsTerm> {
    prop::collection::vec(p, 1..=3)
        .prop_map(|mut ps| if ps.len() == 1 { ps.pop().unwrap() } else { CcsTerm::Sum(ps) })
        .boxed()
}

/// Continuations without parallel composition.
fn sequential_term(depth: u32) -> BoxedStrategy<CcsTerm> {
    if depth == 0 {
        return Just(CcsTerm::Nil).boxed();
    }
    prop_oneof![
        2 => Just(CcsTerm::Nil),
        3 => sum_of(prefix_over(sequential_term(depth - 1))),
    ]
    .boxed()
}

/// Any finite term; parallel composition may appear under prefixes.
fn any_term(depth: u32) -> BoxedStrategy<CcsTerm> {
    if depth == 0 {
        return Just(CcsTerm::Nil).boxed();
    }
    let k = any_term(depth - 1);
    prop_oneof![
        2 => Just(CcsTerm::Nil),
        3 => sum_of(prefix_over(k.clone())),
        1 => prop::collection::vec(sum_of(prefix_over(k)), 2..=3).prop_map(CcsTerm::Par),
    ]
    .boxed()
}

/// Top-level parallel composition of sums whose continuations are sequential.
pub fn flat_ccs(max_prefixes: usize) -> impl Strategy<Value = CcsTerm> {
    prop::collection::vec(sum_of(prefix_over(sequential_term(2))), 1..=4)
        .prop_map(|ts| if ts.len() == 1 { ts.into_iter().next().unwrap() } else { CcsTerm::Par(ts) })
        .prop_filter("prefix bound", move |t| t.prefix_count() <= max_prefixes)
}

pub fn nested_ccs(max_prefixes: usize) -> impl Strategy<Value = CcsTerm> {
    prop::collection::vec(sum_of(prefix_over(any_term(2))), 1..=3)
        .prop_map(|ts| if ts.len() == 1 { ts.into_iter().next().unwrap() } else { CcsTerm::Par(ts) })
        .prop_filter("prefix bound", move |t| t.prefix_count() <= max_prefixes)
}

/// Classes of `xs` up to lean equivalence.
pub fn classes(xs: &[Bigraph]) -> Vec<Bigraph> {
    let mut out: Vec<Bigraph> = Vec::new();
    for x in xs {
        if !out.iter().any(|y| lean_equiv(x, y).is_some()) {
            out.push(x.clone());
        }
    }
    out
}

/// Whether two lists denote the same set up to lean equivalence.
pub fn same_classes(xs: &[Bigraph], ys: &[Bigraph]) -> bool {
    let (a, b) = (classes(xs), classes(ys));
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| lean_equiv(x, y).is_some()))
}

pub fn names(xs: &[&str]) -> BTreeSet<brs_core::mset::Sym> {
    xs.iter().map(|x| brs_core::mset::Sym::new(x)).collect()
}
