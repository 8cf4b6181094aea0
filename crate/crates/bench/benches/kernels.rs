use std::hint::black_box;

use campanato_bench::{grid, rough, spaces};
use campanato_core::maximal::maximal;
use campanato_core::oscillation::x_campanato;
use campanato_core::sparse::cz_sparse;
use campanato_core::{MaximalMode, PhiParameter};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_maximal(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximal");
    for (dim, level) in [(1, 8), (2, 4)] {
        let f = rough(dim, level);
        for mode in [MaximalMode::Full, MaximalMode::Dyadic] {
            group.bench_with_input(BenchmarkId::new(format!("{mode}/n{dim}"), level), &f, |b, f| {
                b.iter(|| maximal(black_box(f), mode))
            });
        }
    }
    group.finish();
}

fn bench_norms(c: &mut Criterion) {
    let mut group = c.benchmark_group("quasi_norm");
    let g = grid(1, 10);
    let f = rough(1, 10);
    for (name, x) in spaces(g) {
        group.bench_function(name, |b| b.iter(|| x.quasi_norm(black_box(&f)).unwrap()));
    }
    group.finish();
}

fn bench_x_campanato(c: &mut Criterion) {
    let mut group = c.benchmark_group("x_campanato");
    group.sample_size(10);
    let g = grid(1, 6);
    let f = rough(1, 6);
    let phi = PhiParameter::power(0.5).unwrap();
    for (name, x) in spaces(g) {
        group.bench_function(name, |b| b.iter(|| x_campanato(black_box(&f), &phi, &x).unwrap()));
    }
    group.finish();
}

fn bench_sparse(c: &mut Criterion) {
    let mut group = c.benchmark_group("cz_sparse");
    for (dim, level) in [(1, 10), (2, 5)] {
        let g = grid(dim, level);
        let f = rough(dim, level);
        let root = g.base_cube();
        group.bench_with_input(BenchmarkId::new(format!("n{dim}"), level), &f, |b, f| {
            b.iter(|| cz_sparse(black_box(f), &root, 2.0).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_maximal, bench_norms, bench_x_campanato, bench_sparse);
criterion_main!(kernels);
