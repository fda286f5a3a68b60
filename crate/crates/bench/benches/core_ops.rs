use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use atiyah_bench::{cyclotomic_pair, lamplighter_markov, s3_test_matrix};
use atiyah_core::approx::lamplighter_kernel_dim;
use atiyah_core::vnla::{kernel_basis, kernel_projection, regular_rep};

fn bench_regular_rep_kernel(c: &mut Criterion) {
    let a = s3_test_matrix();
    c.bench_function("regular_rep s3 2x2", |b| {
        b.iter(|| black_box(regular_rep(black_box(&a))))
    });
    let rep = regular_rep(&a);
    c.bench_function("kernel_basis s3 12x12", |b| {
        b.iter(|| black_box(kernel_basis(black_box(&rep))))
    });
    c.bench_function("kernel_projection s3 2x2", |b| {
        b.iter(|| black_box(kernel_projection(black_box(&a))))
    });
}

fn bench_lamplighter_blocks(c: &mut Criterion) {
    let (n, markov) = lamplighter_markov(6);
    c.bench_function("lamplighter_kernel_dim n=6", |b| {
        b.iter(|| black_box(lamplighter_kernel_dim(n, black_box(&markov)).unwrap()))
    });
}

fn bench_cyclotomic_mul(c: &mut Criterion) {
    let (a, b) = cyclotomic_pair();
    c.bench_function("cyclotomic mul z8", |bch| {
        bch.iter(|| black_box(a.checked_mul(black_box(&b)).unwrap()))
    });
    c.bench_function("cyclotomic inverse z8", |bch| {
        bch.iter(|| black_box(a.inverse().unwrap()))
    });
}

criterion_group!(
    benches,
    bench_regular_rep_kernel,
    bench_lamplighter_blocks,
    bench_cyclotomic_mul
);
criterion_main!(benches);
