use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use veech_bench::{h2, h2_config, horizontal_seed, theta_gens, torus_config};
use veech_core::direction::theta_superset;
use veech_core::pipeline::{catalog, theta_stage, triple_stage};
use veech_core::run;
use veech_core::simulation::expand;

fn stages(c: &mut Criterion) {
    c.bench_function("theta S T^2 len 4", |b| {
        b.iter(|| theta_superset(black_box(&theta_gens()), 4).unwrap())
    });
    c.bench_function("expand seed depth 6", |b| {
        b.iter(|| expand(&h2(), &theta_gens(), black_box(&horizontal_seed()), 6).unwrap())
    });
    let cfg = h2_config(4);
    let theta = theta_stage(&cfg).unwrap();
    c.bench_function("triple stage depth 4", |b| {
        b.iter(|| {
            let mut cat = catalog(&cfg, &theta);
            triple_stage(&cfg, &mut cat, 4).unwrap().matches.len()
        })
    });
}

fn runs(c: &mut Criterion) {
    let mut g = c.benchmark_group("run");
    g.sample_size(10);
    g.bench_function("torus", |b| b.iter(|| run(black_box(&torus_config())).unwrap()));
    g.bench_function("H(2) S T^2 depth 4", |b| {
        b.iter(|| run(black_box(&h2_config(4))).unwrap())
    });
    g.finish();
}

criterion_group!(benches, stages, runs);
criterion_main!(benches);
