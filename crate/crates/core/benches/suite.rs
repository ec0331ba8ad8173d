//! Axiom suite and adjunction checks, rayon pool against the sequential path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use factn_core::frobenius::adjunction_suite;
use factn_core::named_backend;
use factn_core::parallel::Execution;
use factn_core::triangles::run_axiom_suite;

fn modes() -> [(&'static str, Execution); 2] {
    [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)]
}

fn axiom_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("axiom_suite");
    group.sample_size(10);
    for backend in ["fp5", "qxy", "twist"] {
        let b = named_backend(backend).expect("known backend");
        for (mode, exec) in modes() {
            group.bench_with_input(BenchmarkId::new(mode, backend), &b, |bench, b| {
                bench.iter(|| run_axiom_suite(b, 4, 16, 7, None, exec).expect("suite runs"))
            });
        }
    }
    group.finish();
}

fn adjunctions(c: &mut Criterion) {
    let mut group = c.benchmark_group("adjunctions");
    group.sample_size(10);
    let b = named_backend("graded").expect("known backend");
    for (mode, exec) in modes() {
        group.bench_function(mode, |bench| bench.iter(|| adjunction_suite(&b, 4, 32, 3, exec).expect("suite runs")));
    }
    group.finish();
}

criterion_group!(benches, axiom_suite, adjunctions);
criterion_main!(benches);
