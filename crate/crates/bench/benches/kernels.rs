use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use triality::linalg::hermitian_eigen;
use triality::{roof_minimize, run_theorem_suite, triality_report, Mode, RoofConfig, SimplexFunction};
use triality_bench::{full_rank, with_rank, SEED};

fn eigensolver(c: &mut Criterion) {
    let mut g = c.benchmark_group("hermitian_eigen");
    for dim in [2, 4, 8, 16] {
        let rho = full_rank(dim);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &rho, |b, rho| {
            b.iter(|| hermitian_eigen(black_box(rho.matrix())))
        });
    }
    g.finish();
}

fn direct_report(c: &mut Criterion) {
    let l1 = SimplexFunction::builtin("l1").unwrap();
    let rho = full_rank(8);
    c.bench_function("triality_report/l1/direct/8", |b| {
        b.iter(|| triality_report(&l1, black_box(&rho), Mode::Direct, None).unwrap())
    });
}

fn roof(c: &mut Criterion) {
    let mut g = c.benchmark_group("roof_minimize");
    g.sample_size(10);
    for name in ["l1", "entropy", "fidelity"] {
        let f = SimplexFunction::builtin(name).unwrap();
        let rho = full_rank(2);
        let cfg = RoofConfig::with_seed(SEED);
        g.bench_function(BenchmarkId::new(name, "qubit"), |b| {
            b.iter(|| roof_minimize(&f, black_box(&rho), &cfg).unwrap())
        });
    }
    let f = SimplexFunction::builtin("entropy").unwrap();
    let rho = with_rank(4, 2);
    let cfg = RoofConfig::with_seed(SEED);
    g.bench_function(BenchmarkId::new("entropy", "dim4-rank2"), |b| {
        b.iter(|| roof_minimize(&f, black_box(&rho), &cfg).unwrap())
    });
    g.finish();
}

fn theorem_suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("theorem_suite");
    g.sample_size(10);
    let l1 = SimplexFunction::builtin("l1").unwrap();
    g.bench_function("l1/direct/dims2-4/100", |b| {
        b.iter(|| run_theorem_suite(&l1, Mode::Direct, &[2, 3, 4], 100, SEED, None))
    });
    g.finish();
}

criterion_group!(benches, eigensolver, direct_report, roof, theorem_suite);
criterion_main!(benches);
