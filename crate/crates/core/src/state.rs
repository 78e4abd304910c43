//! Finite product state spaces `E = ∏ E_i`, partial configurations and the
//! row-major flat indexing shared by every table in the crate.
//!
//! The flat index of a configuration over a domain `a` is row-major in label
//! order: the last label of `a` varies fastest.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::covering::{IndexSet, Subset};
use crate::error::{Error, Result};

/// Upper bound on `|E|`.
pub const MAX_STATES: u128 = 1 << 31;

#[derive(Clone, PartialEq, Eq)]
pub struct StateSpace {
    index: IndexSet,
    alphabets: Arc<Vec<Vec<String>>>,
}

impl StateSpace {
    pub fn new(index: &IndexSet, alphabets: Vec<Vec<String>>) -> Result<Self> {
        if alphabets.len() != index.len() {
            return Err(Error::Arity {
                expected: index.len(),
                found: alphabets.len(),
            });
        }
        for (i, a) in alphabets.iter().enumerate() {
            if a.is_empty() {
                return Err(Error::EmptyAlphabet(index.label(i).to_string()));
            }
        }
        let total: u128 = alphabets
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(a.len() as u128))
            .unwrap_or(u128::MAX);
        if total > MAX_STATES {
            return Err(Error::StateCountOverflow(total, MAX_STATES));
        }
        Ok(StateSpace {
            index: index.clone(),
            alphabets: Arc::new(alphabets),
        })
    }

    /// Alphabets `{"0", …, "k-1"}` of the given sizes.
    pub fn with_sizes(index: &IndexSet, sizes: &[usize]) -> Result<Self> {
        let alphabets = sizes
            .iter()
            .map(|&k| (0..k).map(|s| s.to_string()).collect())
            .collect();
        Self::new(index, alphabets)
    }

    pub fn uniform(index: &IndexSet, k: usize) -> Result<Self> {
        Self::with_sizes(index, &vec![k; index.len()])
    }

    /// `n` binary variables labelled `1..=n`.
    pub fn binary(n: usize) -> Result<Self> {
        Self::uniform(&IndexSet::one_based(n)?, 2)
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn alphabet(&self, i: usize) -> &[String] {
        &self.alphabets[i]
    }

    pub fn size(&self, i: usize) -> usize {
        self.alphabets[i].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.alphabets.iter().map(Vec::len).collect()
    }

    /// `|E|`.
    pub fn state_count(&self) -> usize {
        self.count(self.index.full())
    }

    /// `|E_a|`.
    pub fn count(&self, a: Subset) -> usize {
        a.iter().map(|i| self.size(i)).product()
    }

    /// The space `E_a`, over the labels of `a` only.
    pub fn sub_space(&self, a: Subset) -> StateSpace {
        StateSpace {
            index: self.index.restrict(a),
            alphabets: Arc::new(a.iter().map(|i| self.alphabets[i].clone()).collect()),
        }
    }

    /// Digits of the full configuration at flat position `k`.
    pub fn decode(&self, mut k: usize) -> Vec<u32> {
        let mut digits = vec![0u32; self.len()];
        for i in (0..self.len()).rev() {
            let s = self.size(i);
            digits[i] = (k % s) as u32;
            k /= s;
        }
        digits
    }

    /// Flat position inside `E_a` of the digits of `a` taken from a full
    /// digit vector.
    pub fn encode_on(&self, a: Subset, digits: &[u32]) -> usize {
        a.iter()
            .fold(0, |acc, i| acc * self.size(i) + digits[i] as usize)
    }

    /// For every configuration `x ∈ E` (by flat position), the flat position
    /// of `x_a` in `E_a`.
    pub fn projection(&self, a: Subset) -> Vec<usize> {
        (0..self.state_count())
            .map(|k| self.encode_on(a, &self.decode(k)))
            .collect()
    }

    /// Flat position of a partial state inside `E_domain`.
    pub fn flat_index(&self, x: &PartialState) -> usize {
        x.domain
            .iter()
            .zip(&x.symbols)
            .fold(0, |acc, (i, &s)| acc * self.size(i) + s as usize)
    }

    /// All configurations on `a`, row-major.
    pub fn enumerate(&self, a: Subset) -> Vec<PartialState> {
        let positions: Vec<usize> = a.iter().collect();
        let total = self.count(a);
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0u32; positions.len()];
        for _ in 0..total {
            out.push(PartialState {
                domain: a,
                symbols: digits.clone(),
            });
            for k in (0..positions.len()).rev() {
                digits[k] += 1;
                if (digits[k] as usize) < self.size(positions[k]) {
                    break;
                }
                digits[k] = 0;
            }
        }
        out
    }

    /// Checks that every symbol of `x` belongs to its alphabet.
    pub fn validate(&self, x: &PartialState) -> Result<()> {
        self.index.check(x.domain)?;
        for (i, &s) in x.domain.iter().zip(&x.symbols) {
            if s as usize >= self.size(i) {
                return Err(Error::SymbolOutOfRange {
                    label: self.index.label(i).to_string(),
                    symbol: s as usize,
                });
            }
        }
        Ok(())
    }

    /// Looks up symbol labels, e.g. `[("1", "a"), ("3", "b")]`.
    pub fn partial_state<S: AsRef<str>>(&self, assignment: &[(S, S)]) -> Result<PartialState> {
        let mut pairs = Vec::with_capacity(assignment.len());
        for (label, symbol) in assignment {
            let i = self.index.position(label.as_ref())?;
            let s = self.alphabets[i]
                .iter()
                .position(|x| x == symbol.as_ref())
                .ok_or_else(|| Error::UnknownSymbol {
                    label: label.as_ref().to_string(),
                    symbol: symbol.as_ref().to_string(),
                })?;
            pairs.push((i, s as u32));
        }
        pairs.sort_unstable();
        let domain = Subset::from_indices(pairs.iter().map(|p| p.0));
        if domain.len() != pairs.len() {
            return Err(Error::OverlappingGlue);
        }
        PartialState::new(domain, pairs.into_iter().map(|p| p.1).collect())
    }
}

impl std::fmt::Debug for StateSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map()
            .entries(self.index.labels().iter().zip(self.alphabets.iter()))
            .finish()
    }
}

/// An assignment of one symbol (by alphabet position) to each index of a domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialState {
    domain: Subset,
    // in increasing position order
    symbols: Vec<u32>,
}

impl PartialState {
    pub fn new(domain: Subset, symbols: Vec<u32>) -> Result<Self> {
        if domain.len() != symbols.len() {
            return Err(Error::AssignmentLength {
                expected: domain.len(),
                found: symbols.len(),
            });
        }
        Ok(PartialState { domain, symbols })
    }

    /// The unique state on `∅`.
    pub fn empty() -> Self {
        PartialState {
            domain: Subset::EMPTY,
            symbols: Vec::new(),
        }
    }

    /// A full configuration from its digit vector.
    pub fn full(digits: Vec<u32>) -> Self {
        PartialState {
            domain: Subset::full(digits.len()),
            symbols: digits,
        }
    }

    pub fn domain(&self) -> Subset {
        self.domain
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn get(&self, i: usize) -> Option<u32> {
        if !self.domain.contains(i) {
            return None;
        }
        let rank = Subset::from_bits(self.domain.bits() & ((1u64 << i) - 1)).len();
        Some(self.symbols[rank])
    }

    /// `x_a`.
    pub fn restrict(&self, a: Subset) -> Result<PartialState> {
        if !a.is_subset_of(self.domain) {
            return Err(Error::RestrictionOutsideDomain);
        }
        let symbols = self
            .domain
            .iter()
            .zip(&self.symbols)
            .filter(|(i, _)| a.contains(*i))
            .map(|(_, &s)| s)
            .collect();
        Ok(PartialState { domain: a, symbols })
    }

    /// `uv` for disjoint domains.
    pub fn glue(&self, other: &PartialState) -> Result<PartialState> {
        if !self.domain.is_disjoint(other.domain) {
            return Err(Error::OverlappingGlue);
        }
        let domain = self.domain.union(other.domain);
        let symbols = domain
            .iter()
            .map(|i| self.get(i).or_else(|| other.get(i)).expect("in one domain"))
            .collect();
        Ok(PartialState { domain, symbols })
    }
}

/// JSON form: `{"alphabets": {"1": ["a","b"], "2": ["0","1","2"]}}`.
/// Label order is the key order of the object.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpaceJson {
    pub alphabets: serde_json::Map<String, serde_json::Value>,
}

impl StateSpaceJson {
    pub fn into_space(self) -> Result<StateSpace> {
        let index = IndexSet::new(self.alphabets.keys().cloned())?;
        let alphabets = self
            .alphabets
            .into_iter()
            .map(|(_, v)| serde_json::from_value::<Vec<String>>(v))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        StateSpace::new(&index, alphabets)
    }
}

impl From<&StateSpace> for StateSpaceJson {
    fn from(space: &StateSpace) -> Self {
        let alphabets = space
            .index
            .labels()
            .iter()
            .zip(space.alphabets.iter())
            .map(|(l, a)| (l.clone(), serde_json::json!(a)))
            .collect();
        StateSpaceJson { alphabets }
    }
}

impl StateSpace {
    pub fn from_json(text: &str) -> Result<StateSpace> {
        serde_json::from_str::<StateSpaceJson>(text)?.into_space()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StateSpaceJson::from(self)).expect("state space serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(sizes: &[usize]) -> StateSpace {
        StateSpace::with_sizes(&IndexSet::one_based(sizes.len()).unwrap(), sizes).unwrap()
    }

    #[test]
    fn restrict_examples() {
        let x = PartialState::full(vec![1, 0, 1]);
        let a = Subset::from_indices([0, 1]);
        assert_eq!(x.restrict(a).unwrap().symbols(), &[1, 0]);
        assert_eq!(x.restrict(Subset::EMPTY).unwrap(), PartialState::empty());
        assert_eq!(x.restrict(x.domain()).unwrap(), x);
        let y = x.restrict(a).unwrap();
        assert!(matches!(
            y.restrict(Subset::from_indices([2])),
            Err(Error::RestrictionOutsideDomain)
        ));
    }

    #[test]
    fn glue_examples() {
        let u = PartialState::new(Subset::singleton(0), vec![1]).unwrap();
        let v = PartialState::new(Subset::singleton(1), vec![0]).unwrap();
        assert_eq!(u.glue(&v).unwrap(), PartialState::full(vec![1, 0]));
        assert_eq!(PartialState::empty().glue(&v).unwrap(), v);
        assert!(matches!(u.glue(&u), Err(Error::OverlappingGlue)));
        assert_eq!(u.glue(&u).unwrap_err().to_string(), "overlapping glue");
    }

    #[test]
    fn glue_of_complements_rebuilds_state() {
        let x = PartialState::full(vec![2, 0, 1, 1]);
        let a = Subset::from_indices([1, 3]);
        let abar = Subset::full(4).difference(a);
        let rebuilt = x.restrict(a).unwrap().glue(&x.restrict(abar).unwrap()).unwrap();
        assert_eq!(rebuilt, x);
    }

    #[test]
    fn enumerate_examples() {
        let s = space(&[2, 2]);
        let e = s.enumerate(Subset::EMPTY);
        assert_eq!(e, vec![PartialState::empty()]);
        let e = s.enumerate(Subset::full(2));
        let digits: Vec<_> = e.iter().map(|x| x.symbols().to_vec()).collect();
        assert_eq!(digits, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(space(&[2, 3]).enumerate(Subset::full(2)).len(), 6);
    }

    #[test]
    fn enumeration_matches_flat_index_and_projection() {
        let s = space(&[2, 3, 2]);
        let all = s.enumerate(s.index_set().full());
        for (k, x) in all.iter().enumerate() {
            assert_eq!(s.flat_index(x), k);
            assert_eq!(s.decode(k), x.symbols());
        }
        let a = Subset::from_indices([0, 2]);
        let proj = s.projection(a);
        for (k, x) in all.iter().enumerate() {
            assert_eq!(proj[k], s.flat_index(&x.restrict(a).unwrap()));
        }
    }

    #[test]
    fn state_count_guard() {
        let index = IndexSet::one_based(32).unwrap();
        assert!(matches!(
            StateSpace::uniform(&index, 2),
            Err(Error::StateCountOverflow(..))
        ));
        assert!(StateSpace::uniform(&IndexSet::one_based(31).unwrap(), 2).is_ok());
        assert!(matches!(
            StateSpace::with_sizes(&IndexSet::one_based(2).unwrap(), &[2, 0]),
            Err(Error::EmptyAlphabet(_))
        ));
    }

    #[test]
    fn json_round_trip_keeps_label_order() {
        let text = r#"{"alphabets": {"b": ["x","y"], "a": ["0","1","2"]}}"#;
        let s = StateSpace::from_json(text).unwrap();
        assert_eq!(s.index_set().labels(), &["b", "a"]);
        assert_eq!(s.sizes(), vec![2, 3]);
        assert_eq!(StateSpace::from_json(&s.to_json().to_string()).unwrap(), s);
        let x = s.partial_state(&[("a", "2")]).unwrap();
        assert_eq!(x.get(1), Some(2));
    }

    proptest! {
        #[test]
        fn restrict_glue_round_trip(
            digits in proptest::collection::vec(0u32..3, 1..6),
            mask in any::<u64>(),
        ) {
            let n = digits.len();
            let x = PartialState::full(digits);
            let a = Subset::from_bits(mask).intersection(Subset::full(n));
            let b = Subset::full(n).difference(a);
            let u = x.restrict(a).unwrap();
            let v = x.restrict(b).unwrap();
            let uv = u.glue(&v).unwrap();
            prop_assert_eq!(&uv, &x);
            prop_assert_eq!(uv.restrict(a).unwrap(), u.clone());
            prop_assert_eq!(v.glue(&u).unwrap().restrict(b).unwrap(), v);
            // π_a = π^b_a ∘ π_b
            let sub = a.intersection(Subset::from_bits(mask >> 7));
            prop_assert_eq!(u.restrict(sub).unwrap(), x.restrict(sub).unwrap());
        }

        #[test]
        fn enumeration_has_no_duplicates(sizes in proptest::collection::vec(1usize..4, 1..5), mask in any::<u64>()) {
            let s = space(&sizes);
            let a = Subset::from_bits(mask).intersection(s.index_set().full());
            let all = s.enumerate(a);
            prop_assert_eq!(all.len(), s.count(a));
            let unique: std::collections::HashSet<_> = all.iter().collect();
            prop_assert_eq!(unique.len(), all.len());
        }
    }
}
