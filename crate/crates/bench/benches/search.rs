use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randext_bench::{digraph, digraph_csp};
use randext_core::harness::estimate_chunk_acceptance;
use randext_core::subalgebra::{closure_find_triangle_subalgebra, paper_procedure_find};
use randext_core::{gen_random_digraph, solve_ext};

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("gen_random_digraph");
    for n in [64u32, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| gen_random_digraph(black_box(n), 0.5, 1).unwrap())
        });
    }
    group.finish();
}

fn solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_ext");
    for (n, target) in [(10u32, 4u32), (14, 5), (18, 6)] {
        let inst = digraph_csp(n, 0.3, target, 0.7, 3);
        group.bench_with_input(BenchmarkId::new("input", n), &inst, |b, inst| {
            b.iter(|| solve_ext(black_box(inst)).solvable)
        });
    }
    group.finish();
}

fn subalgebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("triangle_subalgebra");
    for n in [32u32, 128, 512] {
        let g = digraph(n, 5);
        group.bench_with_input(BenchmarkId::new("closure", n), &g, |b, g| {
            b.iter(|| closure_find_triangle_subalgebra(black_box(g)))
        });
        group.bench_with_input(BenchmarkId::new("chunked", n), &g, |b, g| {
            b.iter(|| paper_procedure_find(black_box(g), 1, 0.5, None).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    c.bench_function("chunk_acceptance_n100_20graphs", |b| {
        b.iter(|| estimate_chunk_acceptance(100, 0.5, 6, 20, black_box(7)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = generation, solver, subalgebra, monte_carlo
}
criterion_main!(benches);
