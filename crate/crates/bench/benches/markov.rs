use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use factorspace::markov::clique_lemma_check;
use factorspace::{clique_complex, hc_check, Graph, IndexSet, DEFAULT_TOL};
use factorspace_bench::{planted_table, rng};
use rand_chacha::rand_core::RngCore;

fn cliques(c: &mut Criterion) {
    let vertices = IndexSet::one_based(20).unwrap();
    let mut r = rng(5);
    let graphs: Vec<Graph> = (0..16)
        .map(|_| Graph::from_code(&vertices, r.next_u64() & r.next_u64()))
        .collect();
    c.bench_function("clique complex n=20", |b| {
        b.iter(|| {
            for g in &graphs {
                black_box(clique_complex(g).unwrap());
            }
        })
    });
    let five = IndexSet::one_based(5).unwrap();
    c.bench_function("clique lemma all graphs n=5", |b| {
        b.iter(|| {
            for g in Graph::all(&five) {
                black_box(clique_lemma_check(&g).unwrap());
            }
        })
    });
}

fn hammersley_clifford(c: &mut Criterion) {
    let vertices = IndexSet::one_based(4).unwrap();
    let cycle = Graph::from_labels(&vertices, &[("1", "2"), ("2", "3"), ("3", "4"), ("4", "1")]).unwrap();
    let f = planted_table(&clique_complex(&cycle).unwrap().covering(), 2, 3);
    c.bench_function("hc check 4-cycle", |b| {
        b.iter(|| black_box(hc_check(&f, &cycle, DEFAULT_TOL).unwrap()))
    });
}

criterion_group!(benches, cliques, hammersley_clifford);
criterion_main!(benches);
