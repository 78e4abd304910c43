//! Seeded property suites over random and exhaustively enumerated instances.
//!
//! Every suite reports named pass/total counts, the worst residual it saw and
//! a short list of failing cases; failures are reported, never raised. Given
//! the same generator state the reports are identical.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::ci::{graphoid_check, JointDistribution};
use crate::covering::{all_antichains, Antichain, Covering, IndexSet, Subset};
use crate::error::{Error, Result};
use crate::factorize::{
    extract_factors, minimal_factorization, minimal_factorization_descent, refactor_meet, Anchor,
};
use crate::loglin::{intersect_oracle, interaction_dimension, member, CylinderSubspace};
use crate::markov::{clique_complex, clique_lemma_check, hc_check, Graph};
use crate::sample::{generic_table, random_covering, random_factor_system, random_member};
use crate::state::StateSpace;

/// Failing cases kept per suite.
pub const MAX_REPORTED_FAILURES: usize = 10;

/// Largest index set whose coverings are enumerated exhaustively.
pub const MAX_EXHAUSTIVE_COVERINGS: usize = 3;

/// Largest vertex count for the exhaustive clique-lemma suite.
pub const MAX_EXHAUSTIVE_GRAPHS: usize = 6;

/// Largest vertex count for the Hammersley–Clifford suite.
pub const MAX_HC_VERTICES: usize = 4;

/// Largest index set for the random intersection and refactoring suites.
pub const MAX_RANDOM_VARIABLES: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Count {
    pub check: &'static str,
    pub passed: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub counts: Vec<Count>,
    pub worst_residual: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            counts: Vec::new(),
            worst_residual: 0.0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.counts.iter().all(|c| c.passed == c.total)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|c| c.total).sum()
    }

    pub fn failed(&self) -> usize {
        self.counts.iter().map(|c| c.total - c.passed).sum()
    }

    pub fn count(&self, check: &str) -> Option<&Count> {
        self.counts.iter().find(|c| c.check == check)
    }

    fn record(&mut self, check: &'static str, ok: bool, describe: impl FnOnce() -> String) {
        let pos = match self.counts.iter().position(|c| c.check == check) {
            Some(p) => p,
            None => {
                self.counts.push(Count {
                    check,
                    passed: 0,
                    total: 0,
                });
                self.counts.len() - 1
            }
        };
        let c = &mut self.counts[pos];
        c.total += 1;
        if ok {
            c.passed += 1;
        } else if self.failures.len() < MAX_REPORTED_FAILURES {
            self.failures.push(format!("{check}: {}", describe()));
        }
    }

    fn residual(&mut self, r: f64) {
        if r > self.worst_residual || r.is_nan() {
            self.worst_residual = r;
        }
    }
}

fn guard(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::SuiteSize { requested: n, max });
    }
    Ok(())
}

/// Every covering of an `n`-element index set (`2^(2^n)` of them).
pub fn all_coverings(index: &IndexSet) -> Vec<Covering> {
    let subsets = 1u64 << index.len();
    (0..1u64 << subsets)
        .map(|code| {
            let members = (0..subsets)
                .filter(|s| code & (1 << s) != 0)
                .map(Subset::from_bits);
            Covering::new(index, members).expect("subsets of the index set")
        })
        .collect()
}

/// The lattice laws of coverings. Pairs range over every covering of an
/// `n`-element set; third and fourth arguments range over one representative
/// per equivalence class.
pub fn covering_laws(n: usize) -> Result<SuiteReport> {
    guard(n, MAX_EXHAUSTIVE_COVERINGS)?;
    let index = IndexSet::one_based(n)?;
    let all = all_coverings(&index);
    let reps: Vec<Covering> = all_antichains(&index).iter().map(Antichain::to_covering).collect();
    let mut r = SuiteReport::new("covering-laws");

    for a in &all {
        let sat = a.saturate();
        r.record("saturation idempotent", sat.saturate() == sat, || a.to_string());
        r.record("equivalent to saturation", a.equiv(&sat)?, || a.to_string());
        r.record("canonical saturates back", a.canonical().saturation() == sat, || a.to_string());
        r.record("reflexive", a.leq(a)?, || a.to_string());
    }

    let sats: Vec<Covering> = all.iter().map(Covering::saturate).collect();
    let canon: Vec<Antichain> = all.iter().map(Covering::canonical).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            let ab = a.meet(b)?;
            let ba = b.meet(a)?;
            let pair = || format!("{a} {b}");
            r.record("meet commutative", ab.canonical() == ba.canonical(), pair);
            r.record("meet below both", ab.leq(a)? && ab.leq(b)?, pair);
            r.record("union above both", {
                let u = a.union(b)?;
                a.leq(&u)? && b.leq(&u)?
            }, pair);
            r.record("canonical complete invariant", (canon[i] == canon[j]) == a.equiv(b)?, pair);

            let (sa, sb) = (&sats[i], &sats[j]);
            let subset = sa.members().iter().all(|&m| sb.contains(m));
            r.record("saturated leq is inclusion", sa.leq(sb)? == subset, pair);
            let common: Vec<Subset> =
                sa.members().iter().copied().filter(|&m| sb.contains(m)).collect();
            r.record("saturated meet is intersection", sa.meet(sb)?.members() == common, pair);

            for c in &reps {
                let triple = || format!("{a} {b} {c}");
                let left = a.union(b)?.meet(c)?;
                let right = a.meet(c)?.union(&b.meet(c)?)?;
                r.record("distributive", left.canonical() == right.canonical(), triple);
                if a.leq(b)? && b.leq(c)? {
                    r.record("transitive", a.leq(c)?, triple);
                }
            }
        }
    }

    for a in &reps {
        for c in &reps {
            if !a.leq(c)? {
                continue;
            }
            for b in &reps {
                for d in &reps {
                    if !b.leq(d)? {
                        continue;
                    }
                    let quad = || format!("{a} {b} {c} {d}");
                    let ok = a.union(b)?.leq(&c.union(d)?)? && a.meet(b)?.leq(&c.meet(d)?)?;
                    r.record("monotone", ok, quad);
                }
            }
        }
    }
    Ok(r)
}

/// Random pairs over `n` binary variables: the rank of `span_A ∩ span_B`
/// equals the dimension of `span_{A⊓B}`, and random members of
/// `G_A ∩ G_B` lie in `G_{A⊓B}`.
pub fn intersection<R: Rng + ?Sized>(n: usize, trials: usize, tol: f64, rng: &mut R) -> Result<SuiteReport> {
    guard(n, MAX_RANDOM_VARIABLES)?;
    let space = StateSpace::binary(n)?;
    let index = space.index_set();
    let mut r = SuiteReport::new("intersection");
    for t in 0..trials {
        let a = random_covering(index, 3, rng);
        let b = random_covering(index, 3, rng);
        let meet = a.meet(&b)?;
        let case = || format!("trial {t}: A={a} B={b}");

        let dims = intersect_oracle(&space, &a, &b)?;
        let dim_meet = CylinderSubspace::build(&space, &meet)?.dim();
        r.record("rank equality", dims.dim_intersection == dim_meet, || {
            format!("{} (rank {} vs {dim_meet})", case(), dims.dim_intersection)
        });
        r.record("interaction count", dim_meet == interaction_dimension(&space, &meet), case);

        let f = random_member(&space, &[&a, &b], rng)?;
        let m = member(&f, &meet, tol)?;
        r.residual(m.relative());
        r.record("meet membership", m.member, || format!("{} residual {:.5e}", case(), m.residual));
    }
    Ok(r)
}

/// Random instances of `refactor_meet`: factors extracted over `A` and `B`
/// are rewritten over `A ⊓ B` and must reproduce the table.
pub fn refactor<R: Rng + ?Sized>(n: usize, trials: usize, tol: f64, rng: &mut R) -> Result<SuiteReport> {
    guard(n, MAX_RANDOM_VARIABLES)?;
    let space = StateSpace::binary(n)?;
    let index = space.index_set();
    let mut r = SuiteReport::new("refactor");
    for t in 0..trials {
        let a = random_covering(index, 3, rng);
        let b = random_covering(index, 3, rng);
        let case = || format!("trial {t}: A={a} B={b}");
        let f = random_member(&space, &[&a, &b], rng)?;
        let digits = (0..n).map(|i| rng.random_range(0..space.size(i) as u32)).collect();
        let anchor = Anchor::new(&space, digits)?;

        let outcome = extract_factors(&f, &a, tol).and_then(|fa| {
            let fb = extract_factors(&f, &b, tol)?;
            refactor_meet(&f, &fa, &fb, &anchor, tol)
        });
        match outcome {
            Ok(fs) => {
                let err = fs.eval_product()?.max_rel_diff(&f)?;
                r.residual(err);
                r.record("round trip", err <= tol, || format!("{} rel err {err:.5e}", case()));
                let inside = fs.covering().leq(&a.meet(&b)?)?;
                r.record("factors over the meet", inside, case);
            }
            Err(e) => r.record("round trip", false, || format!("{}: {e}", case())),
        }
    }
    Ok(r)
}

/// Every graph on `1..=max_n` vertices: the saturated pairwise and local
/// hulls coincide with the clique complex.
pub fn cliques(max_n: usize) -> Result<SuiteReport> {
    guard(max_n, MAX_EXHAUSTIVE_GRAPHS)?;
    let mut r = SuiteReport::new("clique-lemma");
    for n in 1..=max_n {
        let vertices = IndexSet::one_based(n)?;
        for g in Graph::all(&vertices) {
            let ok = clique_lemma_check(&g)?;
            r.record("hulls saturate to cliques", ok, || g.to_json().to_string());
        }
    }
    Ok(r)
}

/// For every connected graph on `1..=max_n` binary variables: products over
/// the cliques satisfy pairwise Markov, local Markov and clique factorisation;
/// generic tables on non-complete graphs satisfy none of them.
pub fn hammersley_clifford<R: Rng + ?Sized>(
    max_n: usize,
    trials: usize,
    tol: f64,
    rng: &mut R,
) -> Result<SuiteReport> {
    guard(max_n, MAX_HC_VERTICES)?;
    let mut r = SuiteReport::new("hammersley-clifford");
    for n in 1..=max_n {
        let space = StateSpace::binary(n)?;
        let vertices = space.index_set().clone();
        for g in Graph::all(&vertices).filter(Graph::is_connected) {
            let complex = clique_complex(&g)?.covering();
            let graph = || g.to_json().to_string();
            for _ in 0..trials {
                let f = random_factor_system(&space, &complex, rng)?.eval_product()?;
                let p = JointDistribution::normalize(&f);
                let hc = hc_check(p.table(), &g, tol)?;
                r.residual(hc.pairwise.worst_residual.max(hc.local.worst_residual));
                r.record("agreement", hc.agree, graph);
                r.record("clique products satisfy all", hc.agree && hc.cliques.member, graph);
            }
            if g.is_complete() {
                continue;
            }
            for _ in 0..trials {
                let p = JointDistribution::normalize(&generic_table(&space, rng));
                let hc = hc_check(p.table(), &g, tol)?;
                r.record("agreement", hc.agree, graph);
                r.record("generic tables satisfy none", hc.agree && !hc.cliques.member, graph);
            }
        }
    }
    Ok(r)
}

/// Four-variable distributions drawn from both antecedent spaces, alternating
/// binary and ternary alphabets; the consequent must hold.
pub fn graphoid<R: Rng + ?Sized>(trials: usize, tol: f64, rng: &mut R) -> Result<SuiteReport> {
    let index = IndexSet::new(["W", "X", "Y", "Z"])?;
    let spaces = [StateSpace::uniform(&index, 2)?, StateSpace::uniform(&index, 3)?];
    let a = Covering::from_labels(&index, [vec!["W", "X", "Z"], vec!["W", "Y", "Z"]])?;
    let b = Covering::from_labels(&index, [vec!["W", "Y", "Z"], vec!["X", "Y", "Z"]])?;
    let mut r = SuiteReport::new("graphoid");
    for t in 0..trials {
        let space = &spaces[t % 2];
        let p = JointDistribution::normalize(&random_member(space, &[&a, &b], rng)?);
        let report = graphoid_check(&p, tol)?;
        let consequent = report.x_yw_given_z;
        r.residual(consequent.residual);
        let case = || format!("trial {t} (|E_i|={}): residual {:.5e}", space.size(0), consequent.residual);
        r.record("antecedents hold", report.applicable, case);
        r.record("consequent holds", report.holds && consequent.independent, case);
        r.record("meet is consequent", report.meet_is_consequent, case);
    }
    Ok(r)
}

/// Tables over `{1,2,3}` planted on random antichains: the exact minimum
/// recovers the plant, agrees with the descent search, and sits below every
/// antichain whose space contains the table.
pub fn minimal_factorizations<R: Rng + ?Sized>(
    planted: usize,
    per_plant: usize,
    tol: f64,
    rng: &mut R,
) -> Result<SuiteReport> {
    let space = StateSpace::binary(3)?;
    let index = space.index_set();
    let antichains: Vec<Antichain> = all_antichains(index)
        .into_iter()
        .filter(|k| !k.is_empty())
        .collect();
    guard(planted, antichains.len())?;
    let subspaces = antichains
        .iter()
        .map(|k| CylinderSubspace::build(&space, &k.to_covering()).map(|s| s.with_tol(tol)))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..antichains.len()).collect();
    order.shuffle(rng);

    let mut r = SuiteReport::new("minimal-factorization");
    for &p in &order[..planted] {
        let plant = &antichains[p];
        for _ in 0..per_plant {
            let f = random_factor_system(&space, &plant.to_covering(), rng)?.eval_product()?;
            let min = minimal_factorization(&f, tol)?;
            let case = || format!("planted {plant}, found {min}");
            r.record("planted recovered", &min == plant, case);
            r.record("descent agrees", minimal_factorization_descent(&f, tol)? == min, case);
            let v = f.log_values();
            for (k, sub) in antichains.iter().zip(&subspaces) {
                if sub.contains_vector(&v).member {
                    r.record("below every containing antichain", min.leq(k)?, || {
                        format!("{} not below {k}", case())
                    });
                }
            }
        }
    }
    Ok(r)
}

/// Random CI statements on 3 or 4 variables with binary or ternary
/// alphabets, half of them planted to hold: the pointwise and membership
/// routes must give the same answer.
pub fn ci_routes<R: Rng + ?Sized>(trials: usize, tol: f64, rng: &mut R) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("ci-routes");
    for t in 0..trials {
        let n = rng.random_range(3..=4);
        let index = IndexSet::one_based(n)?;
        let space = StateSpace::uniform(&index, rng.random_range(2..=3))?;
        // each variable goes to X, Y, Z or nowhere; X and Y non-empty
        let mut roles: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
        roles[0] = 0;
        roles[1] = 1;
        roles.shuffle(rng);
        let group = |g: usize| Subset::from_indices((0..n).filter(|&i| roles[i] == g));
        let (x, y, z) = (group(0), group(1), group(2));
        let rest = index.full().difference(x.union(y).union(z));

        let planted = t % 2 == 0;
        let f = if planted {
            let cov = Covering::new(&index, [x.union(z).union(rest), y.union(z)])?;
            random_member(&space, &[&cov], rng)?
        } else {
            generic_table(&space, rng)
        };
        let p = JointDistribution::normalize(&f);
        let res = p.ci_test(x, y, z, tol)?;
        r.residual(res.residual);
        let case = || {
            format!(
                "trial {t}: X={} Y={} Z={} pointwise {} ({:.5e}) membership {} ({:.5e})",
                index.format_subset(x),
                index.format_subset(y),
                index.format_subset(z),
                res.independent,
                res.residual,
                res.membership.member,
                res.membership.residual
            )
        };
        r.record("routes agree", res.routes_agree, case);
        r.record("planted answer", res.independent == planted, case);
        if res.independent && res.membership.member {
            let small = res.residual <= 10.0 * tol && res.membership.relative() <= 10.0 * tol;
            r.record("residual scale", small, case);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loglin::DEFAULT_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_suites_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(covering_laws(2).unwrap().passed());
        assert!(intersection(3, 10, DEFAULT_TOL, &mut rng).unwrap().passed());
        let rf = refactor(3, 10, DEFAULT_TOL, &mut rng).unwrap();
        assert!(rf.passed(), "{rf:#?}");
        assert!(cliques(4).unwrap().passed());
        assert!(hammersley_clifford(3, 3, DEFAULT_TOL, &mut rng).unwrap().passed());
        assert!(graphoid(10, DEFAULT_TOL, &mut rng).unwrap().passed());
        assert!(minimal_factorizations(4, 2, DEFAULT_TOL, &mut rng).unwrap().passed());
        let ci = ci_routes(20, DEFAULT_TOL, &mut rng).unwrap();
        assert!(ci.passed(), "{ci:#?}");
    }

    #[test]
    fn suites_are_deterministic() {
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            intersection(3, 5, DEFAULT_TOL, &mut rng).unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn guards() {
        assert!(covering_laws(4).is_err());
        assert!(cliques(7).is_err());
        assert!(cliques(0).is_err());
    }

    #[test]
    fn coverings_of_two_labels() {
        let index = IndexSet::one_based(2).unwrap();
        assert_eq!(all_coverings(&index).len(), 16);
    }
}
