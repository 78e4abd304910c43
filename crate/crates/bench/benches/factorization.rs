use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use factorspace::factorize::minimal_factorization_descent;
use factorspace::{extract_factors, member, minimal_factorization, CylinderSubspace, DEFAULT_TOL};
use factorspace_bench::{chain, planted_table};

fn subspaces(c: &mut Criterion) {
    for (n, k) in [(4, 2), (4, 3), (6, 2)] {
        let cov = chain(n);
        let f = planted_table(&cov, k, 1);
        c.bench_function(&format!("build subspace chain n={n} k={k}"), |b| {
            b.iter(|| black_box(CylinderSubspace::build(f.space(), &cov).unwrap()))
        });
        c.bench_function(&format!("member chain n={n} k={k}"), |b| {
            b.iter(|| black_box(member(&f, &cov, DEFAULT_TOL).unwrap()))
        });
        c.bench_function(&format!("extract factors chain n={n} k={k}"), |b| {
            b.iter(|| black_box(extract_factors(&f, &cov, DEFAULT_TOL).unwrap()))
        });
    }
}

fn minimal(c: &mut Criterion) {
    for n in [3, 4] {
        let f = planted_table(&chain(n), 2, 2);
        c.bench_function(&format!("minimal factorization exact n={n}"), |b| {
            b.iter(|| black_box(minimal_factorization(&f, DEFAULT_TOL).unwrap()))
        });
        c.bench_function(&format!("minimal factorization descent n={n}"), |b| {
            b.iter(|| black_box(minimal_factorization_descent(&f, DEFAULT_TOL).unwrap()))
        });
    }
}

criterion_group!(benches, subspaces, minimal);
criterion_main!(benches);
