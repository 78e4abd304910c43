//! Seeded instances shared by the benchmarks.

use factorspace::sample::{random_covering, random_factor_system};
use factorspace::{Covering, IndexSet, PositiveTable, StateSpace};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` random coverings of `{1..n}` with up to `max_members` members.
pub fn coverings(n: usize, max_members: usize, count: usize, seed: u64) -> Vec<Covering> {
    let index = IndexSet::one_based(n).expect("n ≥ 1");
    let mut rng = rng(seed);
    (0..count)
        .map(|_| random_covering(&index, max_members, &mut rng))
        .collect()
}

/// A product of random factors over `covering` on a uniform space.
pub fn planted_table(covering: &Covering, alphabet: usize, seed: u64) -> PositiveTable {
    let space = StateSpace::uniform(covering.index_set(), alphabet).expect("small space");
    random_factor_system(&space, covering, &mut rng(seed))
        .and_then(|fs| fs.eval_product())
        .expect("factors over the space's own index set")
}

/// The chain `{1,2},{2,3},…,{n-1,n}`.
pub fn chain(n: usize) -> Covering {
    let index = IndexSet::one_based(n).expect("n ≥ 1");
    let links: Vec<Vec<String>> = (1..n).map(|i| vec![i.to_string(), (i + 1).to_string()]).collect();
    Covering::from_labels(&index, links).expect("labels exist")
}
