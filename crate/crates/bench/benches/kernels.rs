use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffmc_bench::{gf, random_matpoly, random_matrix, random_monic};
use ffmc_core::splitfield::{count_splitting_bruteforce, make_ext};
use ffmc_core::verify::coprime_tuples_oracle;
use ffmc_core::{is_unimodular, linearize, smith_form, Fe};

fn char_poly(c: &mut Criterion) {
    let mut g = c.benchmark_group("char_poly");
    for (q, n) in [(2, 8), (16, 8), (3, 16)] {
        let m = random_matrix(&gf(q), n, 1);
        g.bench_with_input(BenchmarkId::new(format!("q{q}"), n), &m, |b, m| {
            b.iter(|| black_box(m.char_poly().unwrap()))
        });
    }
    g.finish();
}

fn smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith_form");
    for (q, n, deg) in [(2, 3, 2), (3, 4, 2), (2, 4, 3)] {
        let m = random_matpoly(&gf(q), n, n, deg, 2);
        g.bench_with_input(BenchmarkId::new(format!("q{q}_deg{deg}"), n), &m, |b, m| {
            b.iter(|| black_box(smith_form(m)))
        });
    }
    g.finish();
}

fn unimodular(c: &mut Criterion) {
    let f = gf(2);
    let a = random_monic(&f, 4, 2, 3, 3);
    let (_, pencil) = linearize(&a).unwrap();
    let mut g = c.benchmark_group("is_unimodular");
    g.bench_function("minors_4x2_deg3", |b| b.iter(|| black_box(is_unimodular(&a))));
    g.bench_function("linearized_pencil", |b| b.iter(|| black_box(is_unimodular(&pencil))));
    g.finish();
}

fn splitting(c: &mut Criterion) {
    let mut g = c.benchmark_group("splitting_sweep");
    g.sample_size(10);
    for (q, m, d) in [(2, 2, 2), (3, 2, 2), (2, 2, 3)] {
        let ctx = make_ext(&gf(q), m, d, None).unwrap();
        g.bench_function(format!("q{q}_m{m}_d{d}"), |b| {
            b.iter(|| black_box(count_splitting_bruteforce(&ctx, m, d, u64::MAX).unwrap()))
        });
    }
    g.finish();
}

fn coprime(c: &mut Criterion) {
    let mut g = c.benchmark_group("coprime_oracle");
    g.sample_size(10);
    for (q, degrees) in [(2u64, vec![2i64, 2, 2]), (3, vec![2, 1, 1])] {
        let f = gf(q);
        let a = vec![Fe::ONE; degrees.len()];
        g.bench_function(format!("q{q}_{degrees:?}"), |b| {
            b.iter(|| black_box(coprime_tuples_oracle(&f, &degrees, &a, u64::MAX).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, char_poly, smith, unimodular, splitting, coprime);
criterion_main!(benches);
