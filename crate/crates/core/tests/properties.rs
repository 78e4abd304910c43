use factorspace::factorize::{minimal_factorization_descent, pair_split};
use factorspace::loglin::{intersect_oracle, interaction_dimension};
use factorspace::markov::{local_hull, pairwise_hull};
use factorspace::sample::{random_factor_system, random_member};
use factorspace::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn covering_of(n: usize, masks: &[u64]) -> Covering {
    let index = IndexSet::one_based(n).unwrap();
    let full = Subset::full(n).bits();
    Covering::new(&index, masks.iter().map(|m| Subset::from_bits(m & full))).unwrap()
}

fn masks() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(any::<u64>(), 0..5)
}

fn nonempty_masks() -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(any::<u64>(), 1..4)
}

proptest! {
    #[test]
    fn leq_is_a_preorder(n in 1usize..=5, a in masks(), b in masks(), c in masks()) {
        let (a, b, c) = (covering_of(n, &a), covering_of(n, &b), covering_of(n, &c));
        prop_assert!(a.leq(&a).unwrap());
        if a.leq(&b).unwrap() && b.leq(&c).unwrap() {
            prop_assert!(a.leq(&c).unwrap());
        }
    }

    #[test]
    fn meet_commutes_and_distributes(n in 1usize..=5, a in masks(), b in masks(), c in masks()) {
        let (a, b, c) = (covering_of(n, &a), covering_of(n, &b), covering_of(n, &c));
        prop_assert_eq!(a.meet(&b).unwrap().canonical(), b.meet(&a).unwrap().canonical());
        let left = a.union(&b).unwrap().meet(&c).unwrap();
        let right = a.meet(&c).unwrap().union(&b.meet(&c).unwrap()).unwrap();
        prop_assert_eq!(left.canonical(), right.canonical());
    }

    #[test]
    fn union_and_meet_are_monotone(n in 1usize..=5, a in masks(), b in masks(), extra in masks()) {
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        // C and D dominate A and B by construction
        let c = a.union(&covering_of(n, &extra)).unwrap();
        let d = b.union(&covering_of(n, &[u64::MAX])).unwrap();
        prop_assert!(a.union(&b).unwrap().leq(&c.union(&d).unwrap()).unwrap());
        prop_assert!(a.meet(&b).unwrap().leq(&c.meet(&d).unwrap()).unwrap());
    }

    #[test]
    fn saturation_laws(n in 1usize..=5, a in masks(), b in masks()) {
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        let (sa, sb) = (a.saturate(), b.saturate());
        prop_assert_eq!(sa.saturate(), sa.clone());
        prop_assert!(a.equiv(&sa).unwrap());
        let inclusion = sa.members().iter().all(|&m| sb.contains(m));
        prop_assert_eq!(sa.leq(&sb).unwrap(), inclusion);
        let common: Vec<Subset> = sa.members().iter().copied().filter(|&m| sb.contains(m)).collect();
        let meet = sa.meet(&sb).unwrap();
        prop_assert_eq!(meet.members(), &common[..]);
        prop_assert_eq!(a.canonical().saturation(), sa);
    }

    #[test]
    fn canonical_decides_equivalence(n in 1usize..=4, a in masks(), b in masks()) {
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        prop_assert_eq!(a.canonical() == b.canonical(), a.equiv(&b).unwrap());
    }

    #[test]
    fn family_meet_ignores_order(n in 1usize..=5, a in nonempty_masks(), b in nonempty_masks(), c in nonempty_masks()) {
        let fam = [covering_of(n, &a), covering_of(n, &b), covering_of(n, &c)];
        let rev = [fam[2].clone(), fam[0].clone(), fam[1].clone()];
        prop_assert_eq!(
            Covering::family_meet(&fam).unwrap().canonical(),
            Covering::family_meet(&rev).unwrap().canonical()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_dimension_matches_meet(n in 1usize..=4, a in masks(), b in masks()) {
        let space = StateSpace::binary(n).unwrap();
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        let dims = intersect_oracle(&space, &a, &b).unwrap();
        let meet = CylinderSubspace::build(&space, &a.meet(&b).unwrap()).unwrap();
        prop_assert_eq!(dims.dim_intersection, meet.dim());
        let union = CylinderSubspace::build(&space, &a.union(&b).unwrap()).unwrap();
        prop_assert_eq!(dims.dim_sum, union.dim());
        prop_assert_eq!(union.dim(), interaction_dimension(&space, &a.union(&b).unwrap()));
    }

    #[test]
    fn members_of_both_spaces_are_members_of_the_meet(n in 2usize..=4, k in 2usize..=3, a in nonempty_masks(), b in nonempty_masks(), seed in any::<u64>()) {
        let index = IndexSet::one_based(n).unwrap();
        let space = StateSpace::uniform(&index, if n == 4 { 2 } else { k }).unwrap();
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        let f = random_member(&space, &[&a, &b], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert!(member(&f, &a, DEFAULT_TOL).unwrap().member);
        prop_assert!(member(&f, &b, DEFAULT_TOL).unwrap().member);
        prop_assert!(member(&f, &a.meet(&b).unwrap(), DEFAULT_TOL).unwrap().member);
    }

    #[test]
    fn membership_is_monotone(n in 1usize..=4, a in nonempty_masks(), extra in masks(), seed in any::<u64>()) {
        let space = StateSpace::binary(n).unwrap();
        let a = covering_of(n, &a);
        let b = a.union(&covering_of(n, &extra)).unwrap();
        let f = random_factor_system(&space, &a, &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap()
            .eval_product()
            .unwrap();
        prop_assert!(member(&f, &a, DEFAULT_TOL).unwrap().member);
        prop_assert!(member(&f, &b, DEFAULT_TOL).unwrap().member);
    }

    #[test]
    fn extracted_factors_reproduce_the_table(n in 1usize..=4, a in nonempty_masks(), seed in any::<u64>()) {
        let space = StateSpace::with_sizes(&IndexSet::one_based(n).unwrap(), &[3, 2, 2, 2][..n]).unwrap();
        let a = covering_of(n, &a);
        let f = random_factor_system(&space, &a, &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap()
            .eval_product()
            .unwrap();
        let fs = extract_factors(&f, &a, DEFAULT_TOL).unwrap();
        prop_assert!(fs.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-9);
    }

    #[test]
    fn refactoring_lands_on_the_meet(n in 2usize..=4, a in nonempty_masks(), b in nonempty_masks(), seed in any::<u64>(), anchor_bits in any::<u64>()) {
        let space = StateSpace::binary(n).unwrap();
        let (a, b) = (covering_of(n, &a), covering_of(n, &b));
        let f = random_member(&space, &[&a, &b], &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let fa = extract_factors(&f, &a, DEFAULT_TOL).unwrap();
        let fb = extract_factors(&f, &b, DEFAULT_TOL).unwrap();
        let meet = a.meet(&b).unwrap();
        let anchors = [
            Anchor::first(&space),
            Anchor::new(&space, (0..n).map(|i| ((anchor_bits >> i) & 1) as u32).collect()).unwrap(),
        ];
        for anchor in &anchors {
            let fs = refactor_meet(&f, &fa, &fb, anchor, DEFAULT_TOL).unwrap();
            prop_assert!(fs.covering().leq(&meet).unwrap());
            prop_assert!(fs.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-9);
        }
    }

    #[test]
    fn minimal_factorization_is_below_containing_coverings(planted in nonempty_masks(), seed in any::<u64>()) {
        let n = 3;
        let space = StateSpace::binary(n).unwrap();
        let planted = covering_of(n, &planted);
        let f = random_factor_system(&space, &planted, &mut ChaCha8Rng::seed_from_u64(seed))
            .unwrap()
            .eval_product()
            .unwrap();
        let min = minimal_factorization(&f, DEFAULT_TOL).unwrap();
        prop_assert!(min.leq(&planted.canonical()).unwrap());
        prop_assert!(min.leq(&graphical_hull(&f, DEFAULT_TOL).unwrap()).unwrap());
        prop_assert_eq!(&minimal_factorization_descent(&f, DEFAULT_TOL).unwrap(), &min);
        for k in all_antichains(space.index_set()).into_iter().filter(|k| !k.is_empty()) {
            if member(&f, &k.to_covering(), DEFAULT_TOL).unwrap().member {
                prop_assert!(min.leq(&k).unwrap());
            }
        }
    }
}

proptest! {
    #[test]
    fn graph_hulls_saturate_to_cliques(n in 1usize..=7, code in any::<u64>()) {
        let vertices = IndexSet::one_based(n).unwrap();
        let g = Graph::from_code(&vertices, code);
        let cliques = clique_complex(&g).unwrap().saturation();
        prop_assert_eq!(pairwise_hull(&g).saturate(), cliques.clone());
        prop_assert_eq!(local_hull(&g).saturate(), cliques.clone());
        for (i, j) in g.edges() {
            prop_assert!(cliques.contains(Subset::from_indices([i, j])));
        }
        for (i, j) in g.non_adjacent_pairs() {
            prop_assert!(!cliques.contains(Subset::from_indices([i, j])));
            prop_assert!(cliques.leq(&pair_split(&vertices, i, j)).unwrap());
        }
    }
}
