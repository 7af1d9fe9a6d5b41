use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use brs_core::bigraph::gen::{random_ground, random_signature, GenParams};
use brs_core::ccs::{ccs_to_bigraph, parse_ccs, tau_rule};
use brs_core::par::Execution;
use brs_core::reaction::{run_brs, Brs, ExploreStrategy, Via};
use brs_core::relational::{check_valid_batch, encode, DEFAULT_GRAPH};

fn modes() -> [(&'static str, Execution); 2] {
    [
        ("sequential", Execution::Sequential),
        ("parallel", Execution::Parallel),
    ]
}

fn validity_batch(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sig = Arc::new(random_signature(&mut rng, 4));
    let params = GenParams {
        max_nodes: 10,
        ..GenParams::default()
    };
    let sets: Vec<_> = (0..128)
        .map(|_| encode(&random_ground(&mut rng, &sig, &params), DEFAULT_GRAPH).unwrap())
        .collect();
    let mut g = c.benchmark_group("check_valid_batch");
    for (label, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, exec| {
            b.iter(|| check_valid_batch(&sets, &sig, *exec))
        });
    }
    g.finish();
}

fn explore_all(c: &mut Criterion) {
    let term = parse_ccs("a.'b | 'a.c + 'a.d | a.'c + b.0 | 'c | 'd.a | 'a").unwrap();
    let agent = ccs_to_bigraph(&term);
    let brs = Brs::new(vec![tau_rule()], Via::Direct);
    let mut g = c.benchmark_group("explore_all");
    g.sample_size(10);
    for (label, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(label), &exec, |b, exec| {
            b.iter(|| {
                run_brs(
                    &agent,
                    &brs,
                    ExploreStrategy::All { max_states: 10_000 },
                    8,
                    *exec,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, validity_batch, explore_all);
criterion_main!(benches);
