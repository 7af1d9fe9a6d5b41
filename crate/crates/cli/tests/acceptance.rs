//! The eight acceptance criteria, one report line each.

use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use brs_core::bigraph::gen::{random_bigraph, random_composable, random_signature, random_with_faces, GenParams};
use brs_core::bigraph::{lean_equiv, Bigraph, Interface, Signature};
use brs_core::brsfile::{parse_bigraph, parse_spec};
use brs_core::ccs::{ccs_to_bigraph, ccs_to_bigraph_over, parse_ccs, tau_rule, CcsTerm};
use brs_core::mset::{ctor, Atom, Engine, Multiset, Sym, Term};
use brs_core::par::Execution;
use brs_core::reaction::{
    compile_reaction, direct_successors, instantiate_eta, kernel_successors, run_brs, Brs, ExploreStrategy,
    ParametricReactionRule, Via,
};
use brs_core::relational::{
    check_valid, compose_encoding, encode, interpret, juxtapose_encoding, normal_form_random, partition,
    validity_rules, Invalidity, DEFAULT_GRAPH,
};

const VENDING: &str = "'c.co | c.'co + c.'t";
/// |⟦B⟧| of the vending machine, from `vending_size_oracle`.
const VENDING_ATOMS: usize = 70;
const ROUND_TRIPS: usize = 500;
const CONFLUENCE_SETS: usize = 50;
const CONFLUENCE_RUNS: u64 = 20;
const LEMMA_PAIRS: usize = 200;
const CCS_TERMS: usize = 300;
const CCS_PREFIXES: usize = 6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Counts atoms straight off the term: every prefix is a node with one
/// port, every alternation (including each component's wrapper) a node
/// with none; free channels are outer names; one root; no sites or edges.
fn vending_size_oracle(t: &CcsTerm) -> usize {
    fn walk(t: &CcsTerm, wrapped: bool, nodes: &mut usize, ports: &mut usize) {
        match t {
            CcsTerm::Nil => {}
            CcsTerm::Par(ts) => ts.iter().for_each(|c| walk(c, false, nodes, ports)),
            CcsTerm::Sum(ts) => {
                *nodes += 1;
                ts.iter().for_each(|c| walk(c, true, nodes, ports));
            }
            CcsTerm::Send(_, k) | CcsTerm::Get(_, k) => {
                if !wrapped {
                    *nodes += 1;
                }
                *nodes += 1;
                *ports += 1;
                walk(k, false, nodes, ports);
            }
        }
    }
    let (mut v, mut p) = (0, 0);
    walk(t, false, &mut v, &mut p);
    let (e, y, m, x, n) = (0, t.free_names().len(), 0, 0, 1);
    4 * v + 2 * e + 2 * y + 3 * p + 2 * m + 2 * x + 2 * n
}

fn criterion_1() -> Outcome {
    let t = parse_ccs(VENDING).map_err(|e| e.to_string())?;
    ensure(vending_size_oracle(&t) == VENDING_ATOMS, "oracle disagrees with the pinned count")?;
    let b = ccs_to_bigraph(&t);
    let m = encode(&b, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
    ensure(m.len() == VENDING_ATOMS, format!("encoding has {} atoms", m.len()))?;
    let r = check_valid(&m, b.signature());
    ensure(r.valid && r.normal_form.is_empty(), format!("not valid: {:?}", r.reasons))?;
    ensure(r.trace.len() <= m.len(), "trace longer than the encoding")?;
    Ok(format!("{} atoms, valid, normal form empty, {} steps", m.len(), r.trace.len()))
}

fn criterion_2() -> Outcome {
    let src = std::fs::read_to_string(fixture("vending.brs")).map_err(|e| e.to_string())?;
    let spec = parse_spec(&src).map_err(|e| e.to_string())?;
    let agent = spec.agent.clone().ok_or("fixture agent missing")?;
    let names = agent.outer().names.clone();
    let want = [
        ccs_to_bigraph_over(&parse_ccs("co | 'co").unwrap(), &names),
        ccs_to_bigraph_over(&parse_ccs("co | 't").unwrap(), &names),
    ];
    let mut report = Vec::new();
    for via in [Via::Direct, Via::Kernel] {
        let brs = Brs::new(spec.rules.clone(), via);
        let trace = run_brs(&agent, &brs, ExploreStrategy::All { max_states: 100 }, 1, Execution::Sequential)
            .map_err(|e| e.to_string())?;
        let succ: Vec<&Bigraph> = trace.successors_of(0).iter().map(|i| &trace.states[*i]).collect();
        ensure(succ.len() == 2, format!("{via:?}: {} successors", succ.len()))?;
        for w in &want {
            ensure(
                succ.iter().filter(|s| lean_equiv(s, w).is_some()).count() == 1,
                format!("{via:?}: no unique successor for an expected reduct"),
            )?;
        }
        report.push(format!("{via:?} 2"));
    }
    Ok(format!("successors {}, matching co|'co and co|'t", report.join(", ")))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = GenParams {
        max_nodes: 10,
        ..GenParams::default()
    };
    for i in 0..ROUND_TRIPS {
        let k = rng.random_range(1..=4);
        let sig = Arc::new(random_signature(&mut rng, k));
        let b = random_bigraph(&mut rng, &sig, &params);
        let m = encode(&b, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
        let back = interpret(&m, &sig).map_err(|e| format!("case {i}: {e}"))?;
        ensure(lean_equiv(&back, &b).is_some(), format!("case {i}: not lean-equivalent"))?;
        ensure(encode(&back, DEFAULT_GRAPH).ok() == Some(m), format!("case {i}: re-encoding differs"))?;
    }
    Ok(format!("{ROUND_TRIPS} bigraphs, 0 failures"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut steps = 0usize;
    for i in 0..CONFLUENCE_SETS {
        let k = rng.random_range(1..=4);
        let sig = Arc::new(random_signature(&mut rng, k));
        let m = encode(&random_bigraph(&mut rng, &sig, &GenParams::default()), DEFAULT_GRAPH)
            .map_err(|e| e.to_string())?;
        let rules = validity_rules(&sig);
        for s in 0..CONFLUENCE_RUNS {
            let (nf, tr) = normal_form_random(&m, &rules, 1000 * i as u64 + s);
            ensure(nf.is_empty(), format!("set {i}, seed {s}: normal form has {} atoms", nf.len()))?;
            steps += tr.len();
        }
    }
    Ok(format!(
        "{CONFLUENCE_SETS} sets x {CONFLUENCE_RUNS} runs reach the empty multiset ({steps} steps)"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = GenParams {
        max_nodes: 8,
        ..GenParams::default()
    };
    for i in 0..LEMMA_PAIRS {
        let k = rng.random_range(1..=4);
        let sig = Arc::new(random_signature(&mut rng, k));
        let (c, f) = random_composable(&mut rng, &sig, &params);
        let whole = encode(&c.compose(&f).map_err(|e| e.to_string())?, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
        let parts = compose_encoding(
            &partition(&c, DEFAULT_GRAPH).map_err(|e| e.to_string())?,
            &partition(&f, DEFAULT_GRAPH).map_err(|e| e.to_string())?,
        );
        ensure(whole == parts, format!("pair {i}: composition lemma fails"))?;

        let g = random_with_faces(
            &mut rng,
            &sig,
            Interface::with_names(1, ["gx".into()].into()),
            Interface::with_names(2, ["gy".into()].into()),
            &params.clone().prefixed("g_"),
        );
        let h = random_with_faces(
            &mut rng,
            &sig,
            Interface::with_names(1, ["hx".into()].into()),
            Interface::with_names(1, ["hy".into()].into()),
            &params.clone().prefixed("h_"),
        );
        let whole = encode(&g.juxtapose(&h).map_err(|e| e.to_string())?, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
        let parts = juxtapose_encoding(&g, &h, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
        ensure(whole == parts, format!("pair {i}: juxtaposition lemma fails"))?;
    }
    Ok(format!("{LEMMA_PAIRS} pairs, both lemmas exact"))
}

fn random_ccs(rng: &mut ChaCha8Rng, depth: u32) -> CcsTerm {
    const CH: [&str; 2] = ["a", "b"];
    let prefix = |rng: &mut ChaCha8Rng, k: CcsTerm| {
        let ch = CH[rng.random_range(0..CH.len())];
        if rng.random_bool(0.5) {
            CcsTerm::send(ch, k)
        } else {
            CcsTerm::get(ch, k)
        }
    };
    let sum = |rng: &mut ChaCha8Rng, depth: u32| {
        let n = rng.random_range(1..=2);
        let mut alts: Vec<CcsTerm> = (0..n)
            .map(|_| {
                let k = if depth == 0 || rng.random_bool(0.4) {
                    CcsTerm::Nil
                } else {
                    random_ccs(rng, depth - 1)
                };
                prefix(rng, k)
            })
            .collect();
        if alts.len() == 1 {
            alts.pop().unwrap()
        } else {
            CcsTerm::Sum(alts)
        }
    };
    let n = rng.random_range(1..=3);
    let mut cs: Vec<CcsTerm> = (0..n).map(|_| sum(rng, depth)).collect();
    if cs.len() == 1 {
        cs.pop().unwrap()
    } else {
        CcsTerm::Par(cs)
    }
}

fn same_up_to_equiv(xs: &[Bigraph], ys: &[Bigraph]) -> bool {
    xs.iter().all(|x| ys.iter().any(|y| lean_equiv(x, y).is_some()))
        && ys.iter().all(|y| xs.iter().any(|x| lean_equiv(x, y).is_some()))
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rule = tau_rule();
    let prog = compile_reaction(&rule);
    let (mut done, mut reacting, mut successors) = (0, 0, 0);
    while done < CCS_TERMS {
        let t = random_ccs(&mut rng, 2);
        if t.prefix_count() > CCS_PREFIXES {
            continue;
        }
        let b = ccs_to_bigraph(&t);
        let direct = direct_successors(&b, &rule).map_err(|e| e.to_string())?;
        let kernel = kernel_successors(&b, &prog).map_err(|e| e.to_string())?;
        ensure(
            same_up_to_equiv(&direct, &kernel),
            format!("{t}: direct {} vs kernel {}", direct.len(), kernel.len()),
        )?;
        done += 1;
        reacting += usize::from(!direct.is_empty());
        successors += direct.len();
    }
    Ok(format!(
        "{CCS_TERMS} terms ({reacting} with a redex, {successors} successors), 0 mismatches"
    ))
}

fn graph() -> Sym {
    Sym::new(DEFAULT_GRAPH)
}

fn atom(pred: &str, args: Vec<Term>) -> Atom {
    Atom::new(pred, args, &graph())
}

fn replace(m: &mut Multiset, old: Atom, new: Atom) -> Result<(), String> {
    if !m.remove(&old) {
        return Err(format!("fixture lacks {old:?}"));
    }
    m.insert(new);
    Ok(())
}

fn criterion_7() -> Outcome {
    let b = ccs_to_bigraph(&parse_ccs(VENDING).unwrap());
    let sig = b.signature().clone();
    let base = encode(&b, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
    let hcp = |p: Term, k: u32| atom("has_child_p", vec![p, Term::nat(k)]);

    // n0 (the wrapper of 'c.co) moves under its own descendant n3
    let mut cycle = base.clone();
    replace(
        &mut cycle,
        atom("prnt", vec![ctor::src_n("n0"), ctor::dst_r(0)]),
        atom("prnt", vec![ctor::src_n("n0"), ctor::dst_n("n3")]),
    )?;
    replace(&mut cycle, hcp(ctor::dst_r(0), 2), hcp(ctor::dst_r(0), 1))?;
    replace(&mut cycle, hcp(ctor::dst_n("n3"), 0), hcp(ctor::dst_n("n3"), 1))?;

    let mut dup = base.clone();
    dup.insert(atom("is_node", vec![ctor::node("n4")]));

    let mut count = base.clone();
    replace(&mut count, hcp(ctor::dst_n("n4"), 2), hcp(ctor::dst_n("n4"), 3))?;

    // a port on the arity-0 sum node n0, linked consistently to c
    let mut arity = base.clone();
    arity.insert(atom("is_port", vec![ctor::port("n0", 1)]));
    arity.insert(atom("lp", vec![ctor::port("n0", 1), ctor::node("n0")]));
    arity.insert(atom("link", vec![ctor::src_p("n0", 1), ctor::dst_o("c")]));
    replace(
        &mut arity,
        atom("has_child_l", vec![ctor::dst_o("c"), Term::nat(3)]),
        atom("has_child_l", vec![ctor::dst_o("c"), Term::nat(4)]),
    )?;

    let mut lines = Vec::new();
    for (label, m) in [("prnt cycle", cycle), ("duplicate atom", dup), ("child count", count), ("port arity", arity)] {
        let r = check_valid(&m, &sig);
        ensure(!r.valid, format!("{label}: accepted"))?;
        let stuck = !r.normal_form.is_empty();
        let unique = r.reasons.iter().any(|x| !matches!(x, Invalidity::Stuck));
        ensure(stuck || unique, format!("{label}: rejected without a reason"))?;
        lines.push(format!("{label} {}", if stuck { "stuck" } else { "non-unique" }));
    }
    Ok(format!("rejected: {}", lines.join(", ")))
}

fn five_node_sig() -> Arc<Signature> {
    Arc::new(Signature::from_pairs(&[("A", 0), ("B", 1), ("C", 0), ("K", 1), ("H", 0)]))
}

const PARAMETER: &str = "{ outer { y } edges { e }
    root { p0 A { p1 B { p2 C } p3 K { p4 C } } }
    links { port(p1, 1) -> e  port(p3, 1) -> y } }";

fn criterion_8() -> Outcome {
    let sig = five_node_sig();
    let lit = |s: &str| parse_bigraph(s, &sig).map_err(|e| e.to_string());
    let d = lit(PARAMETER)?;
    let mut supply = Engine::new();

    let gone = instantiate_eta(&[], &d, &mut supply).map_err(|e| e.to_string())?;
    let want_gone = lit("{ outer { y } edges { e } }")?;
    ensure(gone == want_gone, "delete: result differs from the empty context")?;
    let m = encode(&gone, DEFAULT_GRAPH).map_err(|e| e.to_string())?;
    ensure(
        ["is_node", "is_port", "lp", "link", "prnt"].iter().all(|p| m.with_pred(p).count() == 0),
        "delete: node or port atoms remain",
    )?;

    let moved = instantiate_eta(&[0], &d, &mut supply).map_err(|e| e.to_string())?;
    ensure(lean_equiv(&moved, &d).is_some() && moved == d, "move: subtree changed")?;

    let two = instantiate_eta(&[0, 0], &d, &mut supply).map_err(|e| e.to_string())?;
    let want_two = lit(
        "{ outer { y } edges { e }
           root { a0 A { a1 B { a2 C } a3 K { a4 C } } }
           root { b0 A { b1 B { b2 C } b3 K { b4 C } } }
           links { port(a1, 1) -> e  port(a3, 1) -> y  port(b1, 1) -> e  port(b3, 1) -> y } }",
    )?;
    ensure(lean_equiv(&two, &want_two).is_some(), "copy: not the two hand-built copies")?;
    ensure(two.nodes().len() == 10, "copy: wrong node count")?;
    ensure(d.nodes().keys().all(|v| !two.nodes().contains_key(v)), "copy: names not fresh")?;
    ensure(two.outer().names == d.outer().names, "copy: outer names differ")?;

    // same three cases through compiled rules, on p0's tree hosted by h
    let agent = lit(
        "{ outer { y } edges { e }
           root { h H { p0 A { p1 B { p2 C } p3 K { p4 C } } } }
           links { port(p1, 1) -> e  port(p3, 1) -> y } }",
    )?;
    let host = "{ root { h H { site 0 } } }";
    let cases: [(&str, &str, Vec<usize>, &str); 3] = [
        ("del", "{ root { h H } }", vec![], "{ outer { y } edges { e } root { h H } }"),
        (
            "mv",
            "{ root { h C { site 0 } } }",
            vec![0],
            "{ outer { y } edges { e } root { h C { p0 A { p1 B { p2 C } p3 K { p4 C } } } }
               links { port(p1, 1) -> e  port(p3, 1) -> y } }",
        ),
        (
            "cp",
            "{ root { h H { site 0 site 1 } } }",
            vec![0, 0],
            "{ outer { y } edges { e } root { h H { a0 A { a1 B { a2 C } a3 K { a4 C } }
                                              b0 A { b1 B { b2 C } b3 K { b4 C } } } }
               links { port(a1, 1) -> e  port(a3, 1) -> y  port(b1, 1) -> e  port(b3, 1) -> y } }",
        ),
    ];
    for (name, r, eta, want) in cases {
        let rule = ParametricReactionRule::new(name, lit(host)?, lit(r)?, eta).map_err(|e| e.to_string())?;
        let want = lit(want)?;
        for (path, succ) in [
            ("direct", direct_successors(&agent, &rule).map_err(|e| e.to_string())?),
            ("kernel", kernel_successors(&agent, &compile_reaction(&rule)).map_err(|e| e.to_string())?),
        ] {
            ensure(
                succ.len() == 1 && lean_equiv(&succ[0], &want).is_some(),
                format!("{name} via {path}: {} successors, expected one", succ.len()),
            )?;
        }
    }
    Ok("delete, move and copy match the hand-built results directly and through compiled rules".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("vending-machine validity", criterion_1),
        ("one-step tau reduction", criterion_2),
        ("adequacy round trip", criterion_3),
        ("confluence on valid sets", criterion_4),
        ("composition and juxtaposition", criterion_5),
        ("direct vs kernel successors", criterion_6),
        ("invalidity detection", criterion_7),
        ("eta instantiation", criterion_8),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
