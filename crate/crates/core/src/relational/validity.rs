use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bigraph::Signature;
use crate::mset::{
    Atom, Engine, Guard, Multiset, Namespace, RewriteRule, Strategy, Substitution, Sym, Term, Trace,
};
use crate::par::{self, Execution};

/// `arity K = expected` for a bound control variable.
fn arity_of(sig: &Signature, s: &Substitution, var: &str) -> Option<u32> {
    match s.get(var)? {
        Term::Name(n) if n.ns == Namespace::Control => sig.arity(n.id.as_str()),
        _ => None,
    }
}

/// The nine validity rules, in listing order.
pub fn validity_rules(sig: &Arc<Signature>) -> Vec<RewriteRule> {
    let r = |label: &str, lhs: &str, rhs: &str| {
        RewriteRule::parse(label, lhs, rhs).expect("validity rule text parses")
    };
    let node_lhs = "is_node(A)@B, has_child_p(dst_n(A), z)@B, prnt(src_n(A), D)@B, \
                    has_child_p(D, s(N))@B, lc(A, K)@B";
    let s0 = sig.clone();
    let s1 = sig.clone();
    vec![
        r("dr", "is_root(R)@B, has_child_p(dst_r(R), z)@B", ""),
        r("do", "is_o_name(O)@B, has_child_l(dst_o(O), z)@B", ""),
        r("de", "is_e_name(E)@B, has_child_l(dst_e(E), z)@B", ""),
        r(
            "lgpsz",
            "is_port(P)@B, lp(P, A)@B, vp(A, s(z))@B, link(src_p(P), D)@B, has_child_l(D, s(N))@B",
            "has_child_l(D, N)@B",
        ),
        r(
            "lgi",
            "is_i_name(I)@B, link(src_i(I), D)@B, has_child_l(D, s(N))@B",
            "has_child_l(D, N)@B",
        ),
        r(
            "lgs",
            "is_site(S)@B, prnt(src_s(S), D)@B, has_child_p(D, s(N))@B",
            "has_child_p(D, N)@B",
        ),
        r("pgnz", node_lhs, "has_child_p(D, N)@B").with_guard(Guard::new(
            "arity K = 0",
            &[],
            move |s| arity_of(&s0, s, "K") == Some(0),
        )),
        r("pgns", node_lhs, "has_child_p(D, N)@B, vp(A, M)@B").with_guard(Guard::new(
            "arity K = M > 0",
            &["M"],
            move |s| match arity_of(&s1, s, "K") {
                Some(a) if a > 0 => {
                    s.insert(Sym::new("M"), Term::nat(a));
                    true
                }
                _ => false,
            },
        )),
        r(
            "lgps",
            "is_port(P)@B, lp(P, A)@B, vp(A, s(s(M)))@B, link(src_p(P), D)@B, has_child_l(D, s(N))@B",
            "vp(A, s(M))@B, has_child_l(D, N)@B",
        ),
    ]
}

/// Why a multiset fails the validity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Invalidity {
    /// An atom occurs more than once.
    Duplicate(Atom),
    /// Two counters of one predicate share their first argument.
    NonUniqueCounter { pred: Sym, subject: Term, graph: Sym },
    /// Rewriting stopped at a non-empty normal form.
    Stuck,
}

impl std::fmt::Display for Invalidity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Invalidity::Duplicate(a) => write!(f, "duplicate atom {a}"),
            Invalidity::NonUniqueCounter {
                pred,
                subject,
                graph,
            } => write!(
                f,
                "{pred} is not unique on {}@{graph}",
                crate::mset::text::term_to_string(subject, crate::mset::text::Sort::Any)
            ),
            Invalidity::Stuck => write!(f, "rewriting is stuck before reaching the empty multiset"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub valid: bool,
    pub reasons: Vec<Invalidity>,
    pub normal_form: Multiset,
    pub trace: Trace,
}

/// Side conditions: no duplicates, counters unique on their first argument.
pub fn uniqueness_violations(s: &Multiset) -> Vec<Invalidity> {
    let mut out = Vec::new();
    for (a, n) in s.iter_counts() {
        if *n > 1 {
            out.push(Invalidity::Duplicate(a.clone()));
        }
    }
    for pred in ["has_child_p", "has_child_l", "vp"] {
        let mut seen: BTreeMap<(Sym, Term), usize> = BTreeMap::new();
        for (a, _) in s.with_pred(pred) {
            if let Some(first) = a.args.first() {
                *seen.entry((a.graph.clone(), first.clone())).or_insert(0) += 1;
            }
        }
        for ((graph, subject), k) in seen {
            if k > 1 {
                out.push(Invalidity::NonUniqueCounter {
                    pred: Sym::new(pred),
                    subject,
                    graph,
                });
            }
        }
    }
    out
}

/// Valid iff the side conditions hold and rewriting with the validity
/// rules reaches ∅. The deterministic strategy suffices because the system
/// is confluent on inputs meeting the side conditions.
pub fn check_valid(s: &Multiset, sig: &Arc<Signature>) -> ValidityReport {
    check_valid_with(s, &validity_rules(sig))
}

pub fn check_valid_with(s: &Multiset, rules: &[RewriteRule]) -> ValidityReport {
    let mut reasons = uniqueness_violations(s);
    let mut engine = Engine::new();
    let (nf, trace) = engine
        .run(rules, s, &mut Strategy::First, None)
        .expect("validity rules are well formed");
    if !nf.is_empty() {
        reasons.push(Invalidity::Stuck);
    }
    ValidityReport {
        valid: reasons.is_empty(),
        reasons,
        normal_form: nf,
        trace,
    }
}

/// Rewrites with a seeded random strategy; used to test confluence.
pub fn normal_form_random(s: &Multiset, rules: &[RewriteRule], seed: u64) -> (Multiset, Trace) {
    Engine::new()
        .run(rules, s, &mut Strategy::random(seed), None)
        .expect("validity rules are well formed")
}

pub fn check_valid_batch(
    sets: &[Multiset],
    sig: &Arc<Signature>,
    exec: Execution,
) -> Vec<ValidityReport> {
    let rules = validity_rules(sig);
    par::map(exec, sets, |s| check_valid_with(s, &rules))
}
