use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use susybi::par::Execution;
use susybi::partition::discontinuity_report_with;
use susybi::verify::run_suite_with;
use susybi::{build_system_with, Ring, Superpotential};

const STRATEGIES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn build(c: &mut Criterion) {
    let q = Ring::Rational;
    let u = Superpotential::singular(q, 32).unwrap();
    let nu = q.ratio(1, 3);
    let mut g = c.benchmark_group("build_system");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, "N=12 J=16"), &exec, |b, &exec| {
            b.iter(|| build_system_with(black_box(&u), &nu, 12, 16, exec).unwrap())
        });
    }
    g.finish();
}

fn verify(c: &mut Criterion) {
    let q = Ring::Rational;
    let u = Superpotential::singular(q, 24).unwrap();
    let sys = build_system_with(&u, &q.ratio(1, 3), 8, 12, Execution::Parallel).unwrap();
    let mut g = c.benchmark_group("run_suite");
    g.sample_size(20);
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, "N=8 J=12"), &exec, |b, &exec| {
            b.iter(|| run_suite_with(black_box(&sys), 6, exec).unwrap())
        });
    }
    g.finish();
}

fn ladder(c: &mut Criterion) {
    let eps: Vec<f64> = (1..=64).map(|k| 0.25 / k as f64).collect();
    let mut g = c.benchmark_group("discontinuity_ladder");
    for (name, exec) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, eps.len()), &exec, |b, &exec| {
            b.iter(|| discontinuity_report_with(black_box(&eps), 1e-13, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, build, verify, ladder);
criterion_main!(benches);
