mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use brs_core::bigraph::gen::{random_ground, GenParams};
use brs_core::bigraph::{lean_equiv, Bigraph, Child, Link, Parent, Point, Signature};
use brs_core::brsfile::parse_bigraph;
use brs_core::mset::Engine;
use brs_core::reaction::{
    compile_reaction, direct_successors, find_matches, instantiate_eta, kernel_successors, ParametricReactionRule,
};
use brs_core::relational::{encode, DEFAULT_GRAPH};

use common::same_classes;

fn sig() -> Arc<Signature> {
    Arc::new(Signature::from_pairs(&[("A", 0), ("B", 1), ("C", 0), ("K", 1)]))
}

fn lit(src: &str) -> Bigraph {
    parse_bigraph(src, &sig()).unwrap()
}

fn rule(name: &str, l: &str, r: &str, eta: &[usize]) -> ParametricReactionRule {
    ParametricReactionRule::new(name, lit(l), lit(r), eta.to_vec()).unwrap()
}

fn rules() -> Vec<ParametricReactionRule> {
    vec![
        rule("dup", "{ root { v A { site 0 } } }", "{ root { v C { site 0 } w C { site 1 } } }", &[0, 0]),
        rule("del", "{ root { v A { site 0 } } }", "{ root { v C } }", &[]),
        rule("move", "{ root { v A { site 0 } u C } }", "{ root { u C { site 0 } } }", &[0]),
        rule("ground", "{ root { v C } }", "{ root { w A } }", &[]),
        rule(
            "join",
            "{ outer { x y } root { p B q B } links { port(p, 1) -> x  port(q, 1) -> y } }",
            "{ outer { x y } root { p K { q K } } links { port(p, 1) -> y  port(q, 1) -> x } }",
            &[],
        ),
        rule("lift", "{ root { v A { site 0 } site 1 } }", "{ root { site 0 site 1 } }", &[0, 1]),
        rule("swap3", "{ root { v A { site 0 site 1 } site 2 } }", "{ root { v A { site 0 } site 1 site 2 site 3 } }", &[1, 2, 0, 0]),
        rule(
            "private",
            "{ edges { e } root { p B { site 0 } q B } links { port(p, 1) -> e  port(q, 1) -> e } }",
            "{ edges { f } root { p K { site 0 site 1 } } links { port(p, 1) -> f } }",
            &[0, 0],
        ),
    ]
}

/// `p0 A { p1 B { p2 C } p3 K { p4 C } }` with `p1` on edge `e` and `p3` on
/// outer name `y`.
fn five_node_parameter() -> Bigraph {
    lit("{ outer { y } edges { e } root { p0 A { p1 B { p2 C } p3 K { p4 C } } } links { port(p1, 1) -> e  port(p3, 1) -> y } }")
}

#[test]
fn eta_delete_removes_subtree_and_ports() {
    let d = five_node_parameter();
    let out = instantiate_eta(&[], &d, &mut Engine::new()).unwrap();
    assert_eq!(out.outer().width, 0);
    assert!(out.nodes().is_empty());
    let m = encode(&out, DEFAULT_GRAPH).unwrap();
    for pred in ["is_node", "is_port", "lp", "link", "prnt"] {
        assert_eq!(m.with_pred(pred).count(), 0, "{pred}");
    }
}

#[test]
fn eta_move_keeps_names() {
    let d = five_node_parameter();
    let out = instantiate_eta(&[0], &d, &mut Engine::new()).unwrap();
    assert_eq!(out, d);
}

#[test]
fn eta_copy_is_fresh_and_shares_links() {
    let d = five_node_parameter();
    let out = instantiate_eta(&[0, 0], &d, &mut Engine::new()).unwrap();
    assert_eq!(out.outer().width, 2);
    assert_eq!(out.nodes().len(), 10);
    let under = |r: usize| -> BTreeSet<_> {
        let top = out.children(&Parent::Root(r));
        let mut s = BTreeSet::new();
        for c in top {
            if let Child::Node(v) = c {
                s.extend(out.descendants(&v));
                s.insert(Child::Node(v));
            }
        }
        s
    };
    let (a, b) = (under(0), under(1));
    assert_eq!((a.len(), b.len()), (5, 5));
    assert!(a.is_disjoint(&b));
    assert!(d.nodes().keys().all(|v| !out.nodes().contains_key(v)));
    let on_e = out.link().values().filter(|l| **l == Link::edge("e")).count();
    let on_y = out.link().values().filter(|l| **l == Link::outer("y")).count();
    assert_eq!((on_e, on_y), (2, 2));
    for r in 0..2 {
        let mut one = out.clone();
        let keep = under(r);
        one.retain_place(|c| keep.contains(c), r);
        assert!(lean_equiv(&one, &d).is_some(), "copy {r}");
    }
}

#[test]
fn copy_rule_duplicates_parameter() {
    let agent = lit("{ outer { y } root { v A { p0 A { p1 K } } } links { port(p1, 1) -> y } }");
    let dup = &rules()[0];
    let want = lit(
        "{ outer { y } root { v C { a A { b K } } w C { c A { d K } } } links { port(b, 1) -> y  port(d, 1) -> y } }",
    );
    let direct = direct_successors(&agent, dup).unwrap();
    assert!(direct.iter().any(|s| lean_equiv(s, &want).is_some()));
    let kernel = kernel_successors(&agent, &compile_reaction(dup)).unwrap();
    assert!(same_classes(&direct, &kernel));
}

#[test]
fn join_covers_shared_and_distinct_links() {
    let join = &rules()[4];
    let shared = lit("{ outer { z } root { a B b B } links { port(a, 1) -> z  port(b, 1) -> z } }");
    let apart = lit("{ edges { e } outer { z } root { a B b B } links { port(a, 1) -> e  port(b, 1) -> z } }");
    for agent in [shared, apart] {
        let direct = direct_successors(&agent, join).unwrap();
        assert_eq!(direct.len(), 2);
        let kernel = kernel_successors(&agent, &compile_reaction(join)).unwrap();
        assert!(same_classes(&direct, &kernel));
    }
}

#[test]
fn every_match_recomposes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = GenParams {
        max_nodes: 7,
        max_roots: 2,
        ..GenParams::default()
    };
    let mut seen = 0;
    for _ in 0..200 {
        let agent = random_ground(&mut rng, &sig(), &params);
        for r in rules() {
            for d in find_matches(&agent, &r) {
                assert_eq!(d.recompose().unwrap(), agent);
                seen += 1;
            }
        }
    }
    assert!(seen > 100);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn direct_and_kernel_agree_on_random_agents(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = GenParams {
            max_nodes: 7,
            max_roots: 2,
            ..GenParams::default()
        };
        let agent = random_ground(&mut rng, &sig(), &params);
        for r in rules() {
            let direct = direct_successors(&agent, &r).unwrap();
            let kernel = kernel_successors(&agent, &compile_reaction(&r)).unwrap();
            for s in &direct {
                prop_assert!(s.well_formed().is_ok());
                prop_assert_eq!(s.outer(), agent.outer());
            }
            prop_assert!(
                same_classes(&direct, &kernel),
                "rule {}: direct {} kernel {}\n{:?}",
                r.name(),
                direct.len(),
                kernel.len(),
                agent
            );
        }
    }
}

trait RetainPlace {
    fn retain_place(&mut self, keep: impl Fn(&Child) -> bool, root: usize);
}

impl RetainPlace for Bigraph {
    /// Keeps the nodes accepted by `keep`, moved to a single root `root` → 0.
    fn retain_place(&mut self, keep: impl Fn(&Child) -> bool, root: usize) {
        let mut b = Bigraph::new(
            self.signature().clone(),
            self.inner().clone(),
            brs_core::bigraph::Interface::with_names(1, self.outer().names.clone()),
        );
        for e in self.edges() {
            b.add_edge(e.as_str());
        }
        for (c, p) in self.prnt() {
            if !keep(c) {
                continue;
            }
            let Child::Node(v) = c else { continue };
            let p = match p {
                Parent::Root(r) if *r == root => Parent::Root(0),
                other => other.clone(),
            };
            b.add_node(v.as_str(), self.nodes()[v].as_str(), p);
        }
        for (pt, l) in self.link() {
            if let Point::Port(v, i) = pt {
                if keep(&Child::Node(v.clone())) {
                    b.link_port(v.as_str(), *i, l.clone());
                }
            }
        }
        *self = b;
    }
}
