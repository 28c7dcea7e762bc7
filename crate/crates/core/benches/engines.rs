use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gradsym::cohomology::harmonic_h2;
use gradsym::gate::{two_symmetry_flatness, GateOptions};
use gradsym::verify::{run_acceptance, Budget};
use gradsym::{build_model, ModelSpec};
use rayon::ThreadPool;

fn pools() -> Vec<(&'static str, ThreadPool)> {
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("1 thread", single), ("default pool", default)]
}

fn cohomology(c: &mut Criterion) {
    let mut group = c.benchmark_group("harmonic_h2");
    group.sample_size(10);
    for spec in [ModelSpec::Conformal { p: 3, q: 3 }, ModelSpec::Grassmannian { p: 3, q: 3 }] {
        let g = build_model(spec).unwrap();
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, spec), &g, |b, g| {
                b.iter(|| pool.install(|| harmonic_h2(black_box(g)).unwrap()))
            });
        }
    }
    group.finish();
}

fn gate(c: &mut Criterion) {
    let mut group = c.benchmark_group("two_symmetry_flatness");
    group.sample_size(10);
    let g = build_model(ModelSpec::Quaternionic { m: 2 }).unwrap();
    let z = g.dual_g1_basis()[0].clone();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, g.spec), |b| {
            b.iter(|| pool.install(|| two_symmetry_flatness(&g, black_box(&z), &GateOptions::default()).unwrap()))
        });
    }
    group.finish();
}

fn acceptance(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_acceptance");
    group.sample_size(10);
    let budget = Budget::default();
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, budget), |b| {
            b.iter(|| pool.install(|| run_acceptance(black_box(&budget))))
        });
    }
    group.finish();
}

criterion_group!(benches, cohomology, gate, acceptance);
criterion_main!(benches);
