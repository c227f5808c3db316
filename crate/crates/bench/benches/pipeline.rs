use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lowensim_bench::{grover, hermitian_encoding};
use lowensim_core::poly::{jacobi_anger_normalized, low_energy_evolution_polys, TrigKind};
use lowensim_core::{apply_svt, simulate_low_energy, walk_chebyshev, SimOptions};

fn polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolution_polys");
    g.sample_size(10);
    for t in [20.0, 100.0] {
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| low_energy_evolution_polys(black_box(t), 1.0, 0.05, 1e-3).unwrap())
        });
    }
    g.finish();
    c.bench_function("jacobi_anger t=200", |b| b.iter(|| jacobi_anger_normalized(black_box(200.0), 1e-6, TrigKind::Cos).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let be = hermitian_encoding(16, 1).unwrap();
    let p = jacobi_anger_normalized(50.0, 1e-6, TrigKind::Cos).unwrap();
    c.bench_function("apply_svt dim=16", |b| b.iter(|| apply_svt(black_box(&be), &p).unwrap()));
    c.bench_function("walk k=32 dim=16", |b| b.iter(|| walk_chebyshev(black_box(&be), 32).unwrap()));
}

fn end_to_end(c: &mut Criterion) {
    let (input, psi, delta) = grover(16).unwrap();
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    g.bench_function("grover N=16", |b| {
        b.iter(|| simulate_low_energy(&input, 4.0 * PI, delta, 1e-3, black_box(&psi), SimOptions::default()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, polynomials, transforms, end_to_end);
criterion_main!(benches);
