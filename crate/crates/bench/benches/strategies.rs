use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gamecheck::atl::parse_formula;
use gamecheck::global::check_global;
use gamecheck::lcgs::compile;
use gamecheck::local::check_local;
use gamecheck::models;
use gamecheck::strategy::{lp_solve, LinearConstraints, Strategy};

fn standoff(c: &mut Criterion) {
    let mut group = c.benchmark_group("standoff-4-1");
    for q in models::standoff_queries(4, 1) {
        let game = compile(&q.model).unwrap();
        let phi = parse_formula(&q.formula, &game).unwrap();
        group.bench_function(BenchmarkId::new("global", &q.name), |b| {
            b.iter(|| check_global(&game, &phi).unwrap().verdict)
        });
        for s in Strategy::ALL {
            group.bench_function(BenchmarkId::new(s.name(), &q.name), |b| {
                b.iter(|| check_local(&game, &phi, s, 1).unwrap().verdict)
            });
        }
    }
    group.finish();
}

fn gossip_threads(c: &mut Criterion) {
    let q = &models::gossip_queries(3)[1];
    let game = compile(&q.model).unwrap();
    let phi = parse_formula(&q.formula, &game).unwrap();
    let mut group = c.benchmark_group("gossip-threads");
    for w in [1, 2, 4] {
        group.bench_function(BenchmarkId::from_parameter(w), |b| {
            b.iter(|| check_local(&game, &phi, Strategy::Bfs, w).unwrap().verdict)
        });
    }
    group.finish();
}

fn lp(c: &mut Criterion) {
    let lc = LinearConstraints::new(vec![vec![-1.0, 1.0], vec![0.5, 1.0]], vec![1.0, 7.0]);
    c.bench_function("lp-solve", |b| b.iter(|| lp_solve(&lc, &[7.0, 1.0], &[]).unwrap().value));
}

criterion_group!(benches, standoff, gossip_threads, lp);
criterion_main!(benches);
