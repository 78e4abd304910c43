//! Explicit factor systems `(f_a)_{a∈A}` and the constructive side of the
//! intersection property: slicing a product along a subset, refactoring a
//! function that factors over two coverings into factors over their meet,
//! and the minimal covering a table factors over.

use std::collections::BTreeMap;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::covering::{all_antichains, Antichain, Covering, IndexSet, Subset};
use crate::error::{Error, Result};
use crate::loglin::{self, check_positive, max_rel_diff, CylinderSubspace, PositiveTable};
use crate::state::StateSpace;

/// Largest index set accepted by [`minimal_factorization`].
pub const MAX_EXACT_MINFAC: usize = 5;

/// One strictly positive table per member of a covering.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSystem {
    space: StateSpace,
    covering: Covering,
    // aligned with `covering.members()`, each row-major over E_a
    factors: Vec<Vec<f64>>,
}

impl FactorSystem {
    pub fn new(space: &StateSpace, covering: Covering, factors: Vec<Vec<f64>>) -> Result<Self> {
        if covering.index_set() != space.index_set() {
            return Err(Error::IndexSetMismatch);
        }
        if factors.len() != covering.len() {
            return Err(Error::DomainMismatch(format!(
                "{} factors for {} members",
                factors.len(),
                covering.len()
            )));
        }
        for (&a, table) in covering.members().iter().zip(&factors) {
            if table.len() != space.count(a) {
                return Err(Error::DomainMismatch(format!(
                    "factor on {} has {} values, expected {}",
                    space.index_set().format_subset(a),
                    table.len(),
                    space.count(a)
                )));
            }
            check_positive(table)?;
        }
        Ok(FactorSystem {
            space: space.clone(),
            covering,
            factors,
        })
    }

    pub fn from_map(space: &StateSpace, factors: BTreeMap<Subset, Vec<f64>>) -> Result<Self> {
        let covering = Covering::new(space.index_set(), factors.keys().copied())?;
        Self::new(space, covering, factors.into_values().collect())
    }

    /// Multiplies together pieces that share a domain.
    fn from_pieces(space: &StateSpace, pieces: Vec<Piece>) -> Result<Self> {
        let mut merged: BTreeMap<Subset, Vec<f64>> = BTreeMap::new();
        for Piece { domain, table } in pieces {
            match merged.get_mut(&domain) {
                Some(acc) => acc.iter_mut().zip(&table).for_each(|(a, b)| *a *= b),
                None => {
                    merged.insert(domain, table);
                }
            }
        }
        Self::from_map(space, merged)
    }

    fn pieces(&self) -> Vec<Piece> {
        self.iter()
            .map(|(domain, table)| Piece {
                domain,
                table: table.to_vec(),
            })
            .collect()
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn factor(&self, a: Subset) -> Option<&[f64]> {
        let k = self.covering.members().binary_search(&a).ok()?;
        Some(&self.factors[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, &[f64])> {
        self.covering
            .members()
            .iter()
            .copied()
            .zip(self.factors.iter().map(Vec::as_slice))
    }

    /// `x ↦ ∏_a f_a(x_a)`.
    pub fn eval_product(&self) -> Result<PositiveTable> {
        let mut values = vec![1.0; self.space.state_count()];
        for (a, table) in self.iter() {
            for (v, xi) in values.iter_mut().zip(self.space.projection(a)) {
                *v *= table[xi];
            }
        }
        PositiveTable::new(&self.space, values)
    }
}

/// A factor on an explicit domain; several may share a domain mid-algorithm.
#[derive(Clone, Debug)]
struct Piece {
    domain: Subset,
    table: Vec<f64>,
}

/// A full configuration used to freeze coordinates outside a slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor(Vec<u32>);

impl Anchor {
    pub fn new(space: &StateSpace, digits: Vec<u32>) -> Result<Self> {
        if digits.len() != space.len() {
            return Err(Error::AssignmentLength {
                expected: space.len(),
                found: digits.len(),
            });
        }
        for (i, &d) in digits.iter().enumerate() {
            if d as usize >= space.size(i) {
                return Err(Error::SymbolOutOfRange {
                    label: space.index_set().label(i).to_string(),
                    symbol: d as usize,
                });
            }
        }
        Ok(Anchor(digits))
    }

    /// First symbol of every alphabet.
    pub fn first(space: &StateSpace) -> Self {
        Anchor(vec![0; space.len()])
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    fn check(&self, space: &StateSpace) -> Result<()> {
        Anchor::new(space, self.0.clone()).map(|_| ())
    }
}

/// Full digit vectors, one per configuration of `domain` in row-major order,
/// with coordinates outside `domain` taken from `base`.
fn configurations(space: &StateSpace, domain: Subset, base: &[u32]) -> Vec<Vec<u32>> {
    space
        .enumerate(domain)
        .into_iter()
        .map(|x| {
            let mut digits = base.to_vec();
            for (i, &s) in domain.iter().zip(x.symbols()) {
                digits[i] = s;
            }
            digits
        })
        .collect()
}

/// `g(x_{b∩a}) = g̃_b(x_{b∩a} c_{b∖a})` for every piece.
fn slice_pieces(space: &StateSpace, pieces: &[Piece], a: Subset, anchor: &Anchor) -> Vec<Piece> {
    pieces
        .iter()
        .map(|p| {
            let domain = p.domain.intersection(a);
            let table = configurations(space, domain, anchor.digits())
                .iter()
                .map(|digits| p.table[space.encode_on(p.domain, digits)])
                .collect();
            Piece { domain, table }
        })
        .collect()
}

/// Multiplies `table` on `E_outer` by `other^sign` where `other` lives on a
/// subset of `outer`.
fn absorb(space: &StateSpace, outer: Subset, table: &mut [f64], inner: &Piece, sign: i32) {
    debug_assert!(inner.domain.is_subset_of(outer));
    let zeros = vec![0; space.len()];
    for (v, digits) in table.iter_mut().zip(configurations(space, outer, &zeros)) {
        *v *= inner.table[space.encode_on(inner.domain, &digits)].powi(sign);
    }
}

/// Rewrites a product over `B` that lies in the cylinder space of `a` as a
/// product over `{a} ⊓ B`, freezing coordinates outside `a` at the anchor.
pub fn slice_factors(fs: &FactorSystem, a: Subset, anchor: &Anchor, tol: f64) -> Result<FactorSystem> {
    fs.space.index_set().check(a)?;
    anchor.check(&fs.space)?;
    let f = fs.eval_product()?;
    let m = loglin::member(&f, &Covering::singleton(fs.space.index_set(), a)?, tol)?;
    if !m.member {
        return Err(Error::NotInCylinder { residual: m.residual });
    }
    FactorSystem::from_pieces(&fs.space, slice_pieces(&fs.space, &fs.pieces(), a, anchor))
}

/// Given `f = ∏_{a∈A} f_a = ∏_{b∈B} g_b`, returns factors over `A ⊓ B` whose
/// product is `f`. Follows the induction on `|A|`: split off one member `α`,
/// slice `f_α = g / ∏_{c≠α} f_c` along `α`, push the `C ⊓ {α}` part back into
/// the remaining `A` factors and divide the `B ⊓ {α}` part out of the `B`
/// factors, then recurse.
pub fn refactor_meet(
    f: &PositiveTable,
    fs_a: &FactorSystem,
    fs_b: &FactorSystem,
    anchor: &Anchor,
    tol: f64,
) -> Result<FactorSystem> {
    let space = f.space();
    if fs_a.space() != space || fs_b.space() != space {
        return Err(Error::IndexSetMismatch);
    }
    anchor.check(space)?;
    let err = max_rel_diff(fs_a.eval_product()?.values(), f.values())
        .max(max_rel_diff(fs_b.eval_product()?.values(), f.values()));
    if err > tol {
        return Err(Error::FactorSystemsDisagree(err));
    }
    let pieces = refactor_pieces(space, fs_a.pieces(), fs_b.pieces(), anchor);
    FactorSystem::from_pieces(space, pieces)
}

fn refactor_pieces(space: &StateSpace, a: Vec<Piece>, b: Vec<Piece>, anchor: &Anchor) -> Vec<Piece> {
    let mut a = a.into_iter();
    let Some(alpha) = a.next() else {
        return Vec::new();
    };
    let rest: Vec<Piece> = a.collect();
    if rest.is_empty() {
        return slice_pieces(space, &b, alpha.domain, anchor);
    }

    // h1 = f_α = ∏ g_b / ∏ f_c over C ∪ B
    let mut h1: Vec<Piece> = b.clone();
    h1.extend(rest.iter().map(|c| Piece {
        domain: c.domain,
        table: c.table.iter().map(|v| v.recip()).collect(),
    }));
    let sliced = slice_pieces(space, &h1, alpha.domain, anchor);
    let (from_b, from_c) = sliced.split_at(b.len());

    let c_system: Vec<Piece> = rest
        .into_iter()
        .zip(from_c)
        .map(|(mut c, k)| {
            absorb(space, c.domain, &mut c.table, k, 1);
            c
        })
        .collect();
    let b_system: Vec<Piece> = b
        .into_iter()
        .zip(from_b)
        .map(|(mut g, k)| {
            absorb(space, g.domain, &mut g.table, k, -1);
            g
        })
        .collect();

    let mut out = from_b.to_vec();
    out.extend(refactor_pieces(space, c_system, b_system, anchor));
    out
}

/// Some factor system over `A` whose product is `f`. Factors are the
/// minimum-norm least-squares coefficients of `log f` on the indicator basis
/// of `canonical(A)`; members of `A` that are not maximal get the constant 1.
/// Only the product is meaningful; factors are never unique.
pub fn extract_factors(f: &PositiveTable, covering: &Covering, tol: f64) -> Result<FactorSystem> {
    let space = f.space();
    if covering.is_empty() {
        let err = f.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        if err > tol {
            return Err(Error::NotFactorisable { residual: err });
        }
        return FactorSystem::new(space, covering.clone(), Vec::new());
    }
    let sub = CylinderSubspace::build(space, covering)?.with_tol(tol);
    let m = sub.member(f)?;
    if !m.member {
        return Err(Error::NotFactorisable { residual: m.residual });
    }
    let v = DVector::from_vec(f.log_values());
    let theta = loglin::min_norm_solve(sub.basis(), &v);

    let mut by_member = BTreeMap::new();
    let mut offset = 0;
    for &a in sub.covering().members() {
        let len = space.count(a);
        let table = theta.rows(offset, len).iter().map(|t| t.exp()).collect();
        by_member.insert(a, table);
        offset += len;
    }
    let factors = covering
        .members()
        .iter()
        .map(|a| {
            by_member
                .remove(a)
                .unwrap_or_else(|| vec![1.0; space.count(*a)])
        })
        .collect();
    FactorSystem::new(space, covering.clone(), factors)
}

/// The smallest antichain `K` (in the pre-order) such that `f` factors over
/// `K`: the meet of every covering containing `f`. Enumerates all antichains
/// of the power set, so `|I| ≤ 5`.
pub fn minimal_factorization(f: &PositiveTable, tol: f64) -> Result<Antichain> {
    let space = f.space();
    let index = space.index_set();
    if index.len() > MAX_EXACT_MINFAC {
        return Err(Error::MinimalFactorizationTooLarge(index.len()));
    }
    let v = f.log_values();
    // running intersection of saturations, as a bitset over P(I)
    let mut down: u64 = (1u64 << (1 << index.len())) - 1;
    for k in all_antichains(index) {
        if k.is_empty() {
            continue;
        }
        let sat = saturation_bits(&k);
        if sat & down == down {
            // cannot shrink the running meet
            continue;
        }
        let sub = CylinderSubspace::build(space, &k.to_covering())?.with_tol(tol);
        if sub.contains_vector(&v).member {
            down &= sat;
        }
    }
    Ok(down_set_antichain(index, down))
}

fn saturation_bits(k: &Antichain) -> u64 {
    k.members()
        .iter()
        .flat_map(|m| m.subsets())
        .fold(0u64, |acc, s| acc | (1u64 << s.bits()))
}

fn down_set_antichain(index: &IndexSet, down: u64) -> Antichain {
    let members = (0..64u64)
        .filter(|&s| down & (1 << s) != 0)
        .map(Subset::from_bits);
    Antichain::new(index, members).expect("subsets of the index set")
}

/// The same minimum as [`minimal_factorization`], found by descending from
/// `P(I)`: repeatedly drop a maximal element of the current down-set while
/// `f` still factors over what remains. Needs only polynomially many
/// membership tests in `2^|I|`, so it is not limited to `|I| ≤ 5`.
pub fn minimal_factorization_descent(f: &PositiveTable, tol: f64) -> Result<Antichain> {
    let space = f.space();
    let index = space.index_set();
    let v = f.log_values();
    let mut down: Vec<Subset> = index.full().subsets().collect();
    'descend: loop {
        let current = Covering::new(index, down.iter().copied())?;
        for &m in current.canonical().members() {
            let rest: Vec<Subset> = down.iter().copied().filter(|&s| s != m).collect();
            if rest.is_empty() {
                continue;
            }
            let candidate = Covering::new(index, rest.iter().copied())?;
            let sub = CylinderSubspace::build(space, &candidate)?.with_tol(tol);
            if sub.contains_vector(&v).member {
                down = rest;
                continue 'descend;
            }
        }
        return Ok(current.canonical());
    }
}

/// `[i,j] = {I∖{j}, I∖{i}}`, the covering of `X_i ⫫ X_j | X_rest`.
pub fn pair_split(index: &IndexSet, i: usize, j: usize) -> Covering {
    let full = index.full();
    Covering::new(index, [full.without(j), full.without(i)]).expect("within the index set")
}

/// Meet of the pair splits `[i,j]` that contain `f`, or `{I}` if none does.
/// An upper bound on [`minimal_factorization`] that is blind to the absence
/// of higher-order interactions inside a clique.
pub fn graphical_hull(f: &PositiveTable, tol: f64) -> Result<Antichain> {
    let index = f.space().index_set();
    let v = f.log_values();
    let mut holding = Vec::new();
    for i in 0..index.len() {
        for j in i + 1..index.len() {
            let split = pair_split(index, i, j);
            let sub = CylinderSubspace::build(f.space(), &split)?.with_tol(tol);
            if sub.contains_vector(&v).member {
                holding.push(split);
            }
        }
    }
    if holding.is_empty() {
        return Ok(Covering::top(index).canonical());
    }
    Ok(Covering::family_meet(&holding)?.canonical())
}

/// JSON form: `{"covering": [["1","2"]], "factors": {"1,2": [...]}}`, keys
/// are labels joined by commas in index-set order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorSystemJson {
    pub covering: Vec<Vec<String>>,
    pub factors: serde_json::Map<String, serde_json::Value>,
}

pub fn subset_key(index: &IndexSet, a: Subset) -> String {
    index.subset_labels(a).join(",")
}

impl FactorSystem {
    pub fn to_json(&self) -> serde_json::Value {
        let index = self.space.index_set();
        let factors = self
            .iter()
            .map(|(a, t)| (subset_key(index, a), serde_json::json!(t)))
            .collect();
        serde_json::to_value(FactorSystemJson {
            covering: self.covering.label_members(),
            factors,
        })
        .expect("factor system serializes")
    }

    pub fn from_json(space: &StateSpace, text: &str) -> Result<FactorSystem> {
        let raw: FactorSystemJson = serde_json::from_str(text)?;
        let index = space.index_set();
        let covering = Covering::from_labels(index, raw.covering)?;
        let mut factors = Vec::with_capacity(covering.len());
        for &a in covering.members() {
            let key = subset_key(index, a);
            let value = raw
                .factors
                .get(&key)
                .ok_or_else(|| Error::DomainMismatch(format!("no factor for `{key}`")))?;
            factors.push(serde_json::from_value(value.clone())?);
        }
        if raw.factors.len() != covering.len() {
            return Err(Error::DomainMismatch("factors outside the covering".into()));
        }
        FactorSystem::new(space, covering, factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loglin::DEFAULT_TOL;

    fn cov(space: &StateSpace, members: &[&[&str]]) -> Covering {
        Covering::from_labels(space.index_set(), members.iter().map(|m| m.iter())).unwrap()
    }

    fn chain_system() -> FactorSystem {
        let s = StateSpace::binary(3).unwrap();
        let c = cov(&s, &[&["1", "2"], &["2", "3"]]);
        FactorSystem::new(&s, c, vec![vec![0.3, 1.7, 2.2, 0.9], vec![1.1, 0.4, 0.8, 2.5]]).unwrap()
    }

    #[test]
    fn eval_product_matches_pointwise_oracle() {
        let fs = chain_system();
        let f = fs.eval_product().unwrap();
        let f12 = [0.3, 1.7, 2.2, 0.9];
        let f23 = [1.1, 0.4, 0.8, 2.5];
        for k in 0..8 {
            let (x1, x2, x3) = (k >> 2 & 1, k >> 1 & 1, k & 1);
            let expected = f12[x1 * 2 + x2] * f23[x2 * 2 + x3];
            assert!((f.values()[k] - expected).abs() < 1e-15);
        }
        assert!(loglin::member(&f, fs.covering(), DEFAULT_TOL).unwrap().member);
    }

    #[test]
    fn eval_product_trivial_cases() {
        let s = StateSpace::binary(2).unwrap();
        let t = vec![0.5, 1.5, 2.5, 3.5];
        let fs = FactorSystem::new(&s, Covering::top(s.index_set()), vec![t.clone()]).unwrap();
        assert_eq!(fs.eval_product().unwrap().values(), &t[..]);
        let ones = FactorSystem::new(
            &s,
            cov(&s, &[&["1"], &["2"]]),
            vec![vec![1.0; 2], vec![1.0; 2]],
        )
        .unwrap();
        assert!(ones.eval_product().unwrap().values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn factor_system_validation() {
        let s = StateSpace::binary(2).unwrap();
        assert!(FactorSystem::new(&s, Covering::top(s.index_set()), vec![vec![1.0; 3]]).is_err());
        assert!(FactorSystem::new(&s, Covering::top(s.index_set()), vec![vec![1.0, 0.0, 1.0, 1.0]]).is_err());
    }

    #[test]
    fn slice_with_full_set_is_identity() {
        let s = StateSpace::binary(2).unwrap();
        let t = vec![0.5, 1.5, 2.5, 3.5];
        let fs = FactorSystem::new(&s, Covering::top(s.index_set()), vec![t]).unwrap();
        let out = slice_factors(&fs, s.index_set().full(), &Anchor::first(&s), DEFAULT_TOL).unwrap();
        assert_eq!(out, fs);
    }

    #[test]
    fn slice_along_empty_set_needs_constant() {
        let s = StateSpace::binary(2).unwrap();
        let fs = FactorSystem::new(
            &s,
            cov(&s, &[&["1"], &["2"]]),
            vec![vec![2.0, 2.0], vec![3.0, 3.0]],
        )
        .unwrap();
        let out = slice_factors(&fs, Subset::EMPTY, &Anchor::first(&s), DEFAULT_TOL).unwrap();
        assert_eq!(out.covering().members(), &[Subset::EMPTY]);
        assert_eq!(out.factor(Subset::EMPTY).unwrap(), &[6.0]);
        let err = slice_factors(&chain_system(), Subset::EMPTY, &Anchor::first(&s), DEFAULT_TOL);
        assert!(matches!(err, Err(Error::AssignmentLength { .. })));
        let s3 = chain_system().space().clone();
        let err = slice_factors(&chain_system(), Subset::EMPTY, &Anchor::first(&s3), DEFAULT_TOL)
            .unwrap_err();
        assert!(err.to_string().starts_with("input not in G_a: residual="));
    }

    #[test]
    fn slice_chain_lying_in_first_pair() {
        // f23 depends on x2 only, so f ∈ G_{1,2}
        let s = StateSpace::binary(3).unwrap();
        let fs = FactorSystem::new(
            &s,
            cov(&s, &[&["1", "2"], &["2", "3"]]),
            vec![vec![0.3, 1.7, 2.2, 0.9], vec![1.1, 1.1, 0.8, 0.8]],
        )
        .unwrap();
        let a = s.index_set().subset(["1", "2"]).unwrap();
        let f = fs.eval_product().unwrap();
        for anchor in [Anchor::first(&s), Anchor::new(&s, vec![1, 1, 1]).unwrap()] {
            let out = slice_factors(&fs, a, &anchor, DEFAULT_TOL).unwrap();
            assert_eq!(out.covering(), &cov(&s, &[&["1", "2"], &["2"]]));
            assert!(out.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-14);
        }
    }

    #[test]
    fn refactor_with_single_member_is_a_slice() {
        let fs_b = chain_system();
        let s = fs_b.space().clone();
        let f = fs_b.eval_product().unwrap();
        let fs_a = FactorSystem::new(&s, Covering::top(s.index_set()), vec![f.values().to_vec()]).unwrap();
        let out = refactor_meet(&f, &fs_a, &fs_b, &Anchor::first(&s), DEFAULT_TOL).unwrap();
        let direct = slice_factors(&fs_b, s.index_set().full(), &Anchor::first(&s), DEFAULT_TOL).unwrap();
        assert_eq!(out, direct);
    }

    #[test]
    fn refactor_against_itself_keeps_covering() {
        let fs = chain_system();
        let s = fs.space().clone();
        let f = fs.eval_product().unwrap();
        let out = refactor_meet(&f, &fs, &fs, &Anchor::first(&s), DEFAULT_TOL).unwrap();
        assert!(out.covering().equiv(fs.covering()).unwrap());
        assert!(out.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn refactor_rejects_disagreeing_systems() {
        let fs = chain_system();
        let s = fs.space().clone();
        let f = fs.eval_product().unwrap();
        let other = PositiveTable::constant(&s, 1.0).unwrap();
        let fs_c = FactorSystem::new(&s, Covering::top(s.index_set()), vec![other.values().to_vec()]).unwrap();
        let err = refactor_meet(&f, &fs, &fs_c, &Anchor::first(&s), DEFAULT_TOL).unwrap_err();
        assert!(err.to_string().starts_with("factor systems disagree: max rel err="));
    }

    #[test]
    fn extract_examples() {
        let fs = chain_system();
        let s = fs.space().clone();
        let f = fs.eval_product().unwrap();
        let out = extract_factors(&f, fs.covering(), DEFAULT_TOL).unwrap();
        assert!(out.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-10);
        let top = extract_factors(&f, &Covering::top(s.index_set()), DEFAULT_TOL).unwrap();
        assert!(max_rel_diff(top.factor(s.index_set().full()).unwrap(), f.values()) < 1e-12);
        let c = PositiveTable::constant(&s, 2.0).unwrap();
        let k = extract_factors(&c, &Covering::constants(s.index_set()), DEFAULT_TOL).unwrap();
        assert!((k.factor(Subset::EMPTY).unwrap()[0] - 2.0).abs() < 1e-12);
        let err = extract_factors(&f, &cov(&s, &[&["1"], &["2", "3"]]), DEFAULT_TOL);
        assert!(matches!(err, Err(Error::NotFactorisable { .. })));
    }

    #[test]
    fn extract_covering_with_redundant_members() {
        let fs = chain_system();
        let f = fs.eval_product().unwrap();
        let s = fs.space().clone();
        let c = cov(&s, &[&["1", "2"], &["2", "3"], &["2"], &[]]);
        let out = extract_factors(&f, &c, DEFAULT_TOL).unwrap();
        assert_eq!(out.covering(), &c);
        assert_eq!(out.factor(Subset::EMPTY).unwrap(), &[1.0]);
        assert!(out.eval_product().unwrap().max_rel_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn minimal_factorization_examples() {
        let fs = chain_system();
        let s = fs.space().clone();
        let f = fs.eval_product().unwrap();
        let min = minimal_factorization(&f, DEFAULT_TOL).unwrap();
        assert_eq!(min.to_string(), "{{1,2},{2,3}}");
        assert_eq!(minimal_factorization_descent(&f, DEFAULT_TOL).unwrap(), min);
        assert_eq!(graphical_hull(&f, DEFAULT_TOL).unwrap(), min);

        let c = PositiveTable::constant(&s, 0.7).unwrap();
        assert_eq!(minimal_factorization(&c, DEFAULT_TOL).unwrap().to_string(), "{{}}");
        assert_eq!(graphical_hull(&c, DEFAULT_TOL).unwrap().to_string(), "{{1},{2},{3}}");

        let g = PositiveTable::new(&s, vec![1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0]).unwrap();
        assert_eq!(minimal_factorization(&g, DEFAULT_TOL).unwrap().to_string(), "{{1,2,3}}");
        assert_eq!(graphical_hull(&g, DEFAULT_TOL).unwrap().to_string(), "{{1,2,3}}");
    }

    #[test]
    fn minimal_factorization_size_guard() {
        let s = StateSpace::binary(6).unwrap();
        let c = PositiveTable::constant(&s, 1.0).unwrap();
        let err = minimal_factorization(&c, DEFAULT_TOL).unwrap_err();
        assert_eq!(err.to_string(), "exact minimal factorization limited to n≤5; use graphical_hull");
        assert_eq!(minimal_factorization_descent(&c, DEFAULT_TOL).unwrap().to_string(), "{{}}");
    }

    #[test]
    fn factor_system_json_round_trip() {
        let fs = chain_system();
        let text = fs.to_json().to_string();
        assert!(text.contains("\"1,2\""));
        let back = FactorSystem::from_json(fs.space(), &text).unwrap();
        assert_eq!(back, fs);
    }
}
