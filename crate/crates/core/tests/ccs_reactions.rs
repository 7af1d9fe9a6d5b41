mod common;

use proptest::prelude::*;

use brs_core::bigraph::{lean_equiv, Bigraph};
use brs_core::ccs::{ccs_components_to_bigraph, ccs_to_bigraph, ccs_to_bigraph_over, parse_ccs, tau_rule, CcsTerm};
use brs_core::reaction::{compile_reaction, direct_successors, find_matches, kernel_successors};
use brs_core::relational::{check_valid, encode, DEFAULT_GRAPH};

use common::{flat_ccs, nested_ccs, same_classes};

fn components(t: &CcsTerm) -> Vec<CcsTerm> {
    match t {
        CcsTerm::Nil => Vec::new(),
        CcsTerm::Par(ts) => ts.iter().flat_map(components).collect(),
        other => vec![other.clone()],
    }
}

fn alternatives(t: &CcsTerm) -> Vec<CcsTerm> {
    match t {
        CcsTerm::Sum(ts) => ts.clone(),
        other => vec![other.clone()],
    }
}

/// Textbook one-step τ reducts of a parallel composition, as component lists.
fn tau_reducts(t: &CcsTerm) -> Vec<Vec<CcsTerm>> {
    let cs = components(t);
    let mut out = Vec::new();
    for i in 0..cs.len() {
        for j in 0..cs.len() {
            if i == j {
                continue;
            }
            for s in alternatives(&cs[i]) {
                for g in alternatives(&cs[j]) {
                    if let (CcsTerm::Send(x, p), CcsTerm::Get(y, q)) = (&s, &g) {
                        if x != y {
                            continue;
                        }
                        let mut rest: Vec<CcsTerm> = cs
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i && *k != j)
                            .map(|(_, c)| c.clone())
                            .collect();
                        rest.extend(components(p));
                        rest.extend(components(q));
                        out.push(rest);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn vending_machine_reducts() {
    let t = parse_ccs("'c.co | c.'co + c.'t").unwrap();
    let b = ccs_to_bigraph(&t);
    let names = b.outer().names.clone();
    let succ = direct_successors(&b, &tau_rule()).unwrap();
    assert_eq!(succ.len(), 2);
    let want = [
        ccs_to_bigraph_over(&parse_ccs("co | 'co").unwrap(), &names),
        ccs_to_bigraph_over(&parse_ccs("co | 't").unwrap(), &names),
    ];
    assert!(same_classes(&succ, &want));
    let kernel = kernel_successors(&b, &compile_reaction(&tau_rule())).unwrap();
    assert!(same_classes(&kernel, &want));
}

#[test]
fn no_redex_no_successor() {
    let b = ccs_to_bigraph(&parse_ccs("a.b | c").unwrap());
    assert!(find_matches(&b, &tau_rule()).is_empty());
    assert!(kernel_successors(&b, &compile_reaction(&tau_rule())).unwrap().is_empty());
}

#[test]
fn reaction_under_a_prefix() {
    // the continuation of `d` is a parallel composition holding a redex
    let b = ccs_to_bigraph(&parse_ccs("d.(a | 'a)").unwrap());
    let succ = direct_successors(&b, &tau_rule()).unwrap();
    assert_eq!(succ.len(), 1);
    assert_eq!(succ[0].nodes().len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compiled_terms_are_valid(t in nested_ccs(8)) {
        let b = ccs_to_bigraph(&t);
        prop_assert!(b.is_ground());
        prop_assert!(b.well_formed().is_ok());
        prop_assert_eq!(b.outer().names.clone(), t.free_names());
        prop_assert!(check_valid(&encode(&b, DEFAULT_GRAPH).unwrap(), b.signature()).valid);
    }

    #[test]
    fn tau_matches_textbook_semantics(t in flat_ccs(8)) {
        let b = ccs_to_bigraph(&t);
        let names = b.outer().names.clone();
        let want: Vec<Bigraph> = tau_reducts(&t)
            .iter()
            .map(|cs| ccs_components_to_bigraph(cs, &names))
            .collect();
        let got = direct_successors(&b, &tau_rule()).unwrap();
        prop_assert!(same_classes(&got, &want), "{t}: {} successors, {} reducts", got.len(), want.len());
    }

    #[test]
    fn direct_and_kernel_agree(t in nested_ccs(6)) {
        let b = ccs_to_bigraph(&t);
        let prog = compile_reaction(&tau_rule());
        let direct = direct_successors(&b, &tau_rule()).unwrap();
        let kernel = kernel_successors(&b, &prog).unwrap();
        prop_assert!(same_classes(&direct, &kernel), "{t}: direct {} kernel {}", direct.len(), kernel.len());
        for s in &direct {
            prop_assert!(s.well_formed().is_ok());
            prop_assert!(kernel.iter().any(|k| lean_equiv(k, s).is_some()));
        }
    }
}
