use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use brs_core::bigraph::gen::{random_bigraph, random_composable, random_ground, random_interface, random_signature, random_with_faces, GenParams};
use brs_core::bigraph::{lean_equiv, Bigraph, Signature};
use brs_core::mset::text::{multiset_to_text, parse_multiset};
use brs_core::mset::{Engine, Namespace, Trace};
use brs_core::par::Execution;
use brs_core::relational::{
    check_valid, check_valid_batch, compose_encoding, encode, encoding_size, interpret, juxtapose_encoding,
    normal_form_random, partition, validity_rules, DEFAULT_GRAPH,
};

fn setup(seed: u64) -> (ChaCha8Rng, Arc<Signature>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 1 + (seed % 4) as usize;
    let sig = Arc::new(random_signature(&mut rng, n));
    (rng, sig)
}

fn small() -> GenParams {
    GenParams {
        max_nodes: 8,
        ..GenParams::default()
    }
}

/// Bigraph whose names all carry `tag`, so two operands never clash.
fn operand(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, p: &GenParams, tag: &str) -> Bigraph {
    let inner = random_interface(rng, 2, 2, &format!("{tag}x"));
    let outer = random_interface(rng, 2, 2, &format!("{tag}y"));
    random_with_faces(rng, sig, inner, outer, &p.clone().prefixed(&format!("{tag}_")))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn encoding_has_expected_size(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let b = random_bigraph(&mut rng, &sig, &small());
        prop_assert_eq!(encode(&b, DEFAULT_GRAPH).unwrap().len(), encoding_size(&b));
    }

    #[test]
    fn encodings_are_valid_within_bound(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let b = random_bigraph(&mut rng, &sig, &small());
        let m = encode(&b, DEFAULT_GRAPH).unwrap();
        let r = check_valid(&m, &sig);
        prop_assert!(r.valid, "{:?}", r.reasons);
        prop_assert!(r.trace.len() <= m.len());
        prop_assert_eq!(r.trace.replay(&m).unwrap(), r.normal_form);
    }

    #[test]
    fn interpret_inverts_encode(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let b = random_bigraph(&mut rng, &sig, &small());
        let m = encode(&b, DEFAULT_GRAPH).unwrap();
        let back = interpret(&m, &sig).unwrap();
        prop_assert!(lean_equiv(&back, &b).is_some());
        prop_assert_eq!(encode(&back, DEFAULT_GRAPH).unwrap(), m);
    }

    #[test]
    fn random_strategies_share_the_normal_form(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let m = encode(&random_bigraph(&mut rng, &sig, &small()), DEFAULT_GRAPH).unwrap();
        let rules = validity_rules(&sig);
        for k in 0..4 {
            let (nf, _) = normal_form_random(&m, &rules, seed.wrapping_add(k));
            prop_assert!(nf.is_empty());
        }
    }

    #[test]
    fn composition_lemma(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let (c, f) = random_composable(&mut rng, &sig, &small());
        let whole = encode(&c.compose(&f).unwrap(), DEFAULT_GRAPH).unwrap();
        let parts = compose_encoding(&partition(&c, DEFAULT_GRAPH).unwrap(), &partition(&f, DEFAULT_GRAPH).unwrap());
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn juxtaposition_lemma(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let p = small();
        let g = operand(&mut rng, &sig, &p, "g");
        let f = operand(&mut rng, &sig, &p, "f");
        let whole = encode(&g.juxtapose(&f).unwrap(), DEFAULT_GRAPH).unwrap();
        prop_assert_eq!(whole, juxtapose_encoding(&g, &f, DEFAULT_GRAPH).unwrap());
    }

    #[test]
    fn lean_equiv_is_an_equivalence(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let b = random_bigraph(&mut rng, &sig, &small());
        prop_assert!(lean_equiv(&b, &b).is_some());
        let r = b.rename(|v| format!("r_{v}").as_str().into(), |e| format!("r_{e}").as_str().into());
        let s = r.rename(|v| format!("s_{v}").as_str().into(), |e| format!("s_{e}").as_str().into());
        let w = lean_equiv(&b, &r).unwrap();
        prop_assert!(w.verify(&b, &r));
        prop_assert!(lean_equiv(&r, &b).unwrap().verify(&r, &b));
        prop_assert!(w.inverse().verify(&r, &b));
        let w2 = lean_equiv(&r, &s).unwrap();
        prop_assert!(w.then(&w2).verify(&b, &s));
    }

    #[test]
    fn atoms_text_round_trip(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let m = encode(&random_bigraph(&mut rng, &sig, &small()), DEFAULT_GRAPH).unwrap();
        prop_assert_eq!(parse_multiset(&multiset_to_text(&m)).unwrap(), m);
    }

    #[test]
    fn trace_json_round_trip(seed in any::<u64>()) {
        let (mut rng, sig) = setup(seed);
        let m = encode(&random_ground(&mut rng, &sig, &small()), DEFAULT_GRAPH).unwrap();
        let r = check_valid(&m, &sig);
        let back = Trace::from_json_lines(&r.trace.to_json_lines()).unwrap();
        prop_assert_eq!(back.replay(&m).unwrap(), r.normal_form);
    }
}

#[test]
fn fresh_names_never_repeat() {
    let mut e = Engine::new();
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        assert!(seen.insert(e.fresh_name(Namespace::Node)));
    }
}

#[test]
fn batch_matches_sequential() {
    let (mut rng, sig) = setup(3);
    let sets: Vec<_> = (0..40)
        .map(|_| encode(&random_bigraph(&mut rng, &sig, &small()), DEFAULT_GRAPH).unwrap())
        .collect();
    let a = check_valid_batch(&sets, &sig, Execution::Sequential);
    let b = check_valid_batch(&sets, &sig, Execution::Parallel);
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.valid, y.valid);
        assert_eq!(x.trace.final_digest, y.trace.final_digest);
        assert_eq!(x.trace.len(), y.trace.len());
    }
}

#[test]
fn empty_bigraph_is_valid() {
    let sig = Arc::new(Signature::new());
    let m = encode(&Bigraph::empty(sig.clone()), DEFAULT_GRAPH).unwrap();
    assert!(m.is_empty());
    assert!(check_valid(&m, &sig).valid);
}
