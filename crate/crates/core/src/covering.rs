//! Coverings of a finite index set and their pre-order algebra.
//!
//! A [`Covering`] is an arbitrary finite set of subsets of an [`IndexSet`].
//! Coverings are pre-ordered by `A ≤ B ⟺ ∀a∈A ∃b∈B, a ⊆ b` and combined by
//! set union and by the pairwise-intersection meet `A ⊓ B = {a∩b}`. Two
//! coverings are equivalent when each is below the other; the [`Antichain`]
//! of maximal elements is the canonical representative of a class, and
//! [`Covering::saturate`] gives the downward closure, on which the pre-order
//! becomes plain inclusion.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest index set a [`Subset`] bitmask can address.
pub const MAX_INDEX_SET: usize = 64;

/// An ordered list of distinct variable labels. Cheap to clone.
#[derive(Clone)]
pub struct IndexSet(Arc<IndexSetInner>);

struct IndexSetInner {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
}

impl IndexSet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        Self::build(labels)
    }

    /// Labels `0, 1, …, n-1`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    /// Labels `1, 2, …, n`.
    pub fn one_based(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    fn build(labels: Vec<String>) -> Result<Self> {
        if labels.len() > MAX_INDEX_SET {
            return Err(Error::IndexSetTooLarge(labels.len()));
        }
        let mut lookup = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if lookup.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(IndexSet(Arc::new(IndexSetInner { labels, lookup })))
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, position: usize) -> &str {
        &self.0.labels[position]
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.0
            .lookup
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// The whole index set as a subset.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset<I, S>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut s = Subset::EMPTY;
        for l in labels {
            s = s.with(self.position(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.label(i).to_string()).collect()
    }

    /// The labels of `a`, in order, as a new index set. May be empty.
    pub fn restrict(&self, a: Subset) -> IndexSet {
        let labels = a.iter().map(|i| self.label(i).to_string()).collect();
        Self::build(labels).expect("restriction of a valid index set")
    }

    pub(crate) fn check(&self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.full()) {
            Ok(())
        } else {
            Err(Error::IndexSetMismatch)
        }
    }

    pub fn format_subset(&self, s: Subset) -> String {
        format!("{{{}}}", self.subset_labels(s).join(","))
    }
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for IndexSet {}

impl std::hash::Hash for IndexSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.labels.hash(state);
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("IndexSet").field(&self.0.labels).finish()
    }
}

/// A subset of an index set, as a bitmask over label positions.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Subset::EMPTY, Subset::with)
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    /// Positions in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Every subset of `self`, including `∅` and `self`.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(mask);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & mask) };
            Some(Subset(cur))
        })
    }

    /// Renumbers `self ⊆ within` to positions inside `within`.
    pub fn compress(self, within: Subset) -> Subset {
        debug_assert!(self.is_subset_of(within));
        let mut out = 0u64;
        for (k, i) in within.iter().enumerate() {
            if self.contains(i) {
                out |= 1 << k;
            }
        }
        Subset(out)
    }

    /// Inverse of [`Subset::compress`].
    pub fn expand(self, within: Subset) -> Subset {
        let mut out = 0u64;
        for (k, i) in within.iter().enumerate() {
            if self.contains(k) {
                out |= 1 << i;
            }
        }
        Subset(out)
    }

    /// Canonical ordering: larger subsets first, then lexicographic on the
    /// increasing list of positions.
    pub fn canonical_cmp(&self, other: &Subset) -> Ordering {
        other
            .len()
            .cmp(&self.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite set of subsets of an index set. May be empty and may contain `∅`.
#[derive(Clone, PartialEq, Eq)]
pub struct Covering {
    index: IndexSet,
    // sorted by bits, no duplicates
    members: Vec<Subset>,
}

impl Covering {
    pub fn new<I>(index: &IndexSet, members: I) -> Result<Self>
    where
        I: IntoIterator<Item = Subset>,
    {
        let members: Vec<Subset> = members.into_iter().collect();
        for &m in &members {
            index.check(m)?;
        }
        Ok(Self::from_sorted(index.clone(), members))
    }

    fn from_sorted(index: IndexSet, mut members: Vec<Subset>) -> Self {
        members.sort_unstable();
        members.dedup();
        Covering { index, members }
    }

    /// Builds a covering from label lists, e.g. `[["1","2"],["2","3"]]`.
    pub fn from_labels<M, L, S>(index: &IndexSet, members: M) -> Result<Self>
    where
        M: IntoIterator<Item = L>,
        L: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let members = members
            .into_iter()
            .map(|m| index.subset(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_sorted(index.clone(), members))
    }

    /// The covering with no members.
    pub fn empty(index: &IndexSet) -> Self {
        Covering {
            index: index.clone(),
            members: Vec::new(),
        }
    }

    /// `{I}`, the top of the pre-order.
    pub fn top(index: &IndexSet) -> Self {
        Covering {
            index: index.clone(),
            members: vec![index.full()],
        }
    }

    /// `{∅}`, the bottom class among non-empty coverings.
    pub fn constants(index: &IndexSet) -> Self {
        Covering {
            index: index.clone(),
            members: vec![Subset::EMPTY],
        }
    }

    pub fn singleton(index: &IndexSet, a: Subset) -> Result<Self> {
        Self::new(index, [a])
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: Subset) -> bool {
        self.members.binary_search(&a).is_ok()
    }

    fn same_index(&self, other: &Covering) -> Result<()> {
        if self.index == other.index {
            Ok(())
        } else {
            Err(Error::IndexSetMismatch)
        }
    }

    /// `self ≤ other`: every member of `self` lies inside some member of `other`.
    pub fn leq(&self, other: &Covering) -> Result<bool> {
        self.same_index(other)?;
        Ok(self
            .members
            .iter()
            .all(|&a| other.members.iter().any(|&b| a.is_subset_of(b))))
    }

    pub fn equiv(&self, other: &Covering) -> Result<bool> {
        Ok(self.leq(other)? && other.leq(self)?)
    }

    pub fn union(&self, other: &Covering) -> Result<Covering> {
        self.same_index(other)?;
        let members = self.members.iter().chain(&other.members).copied().collect();
        Ok(Self::from_sorted(self.index.clone(), members))
    }

    /// `{a ∩ b : a ∈ self, b ∈ other}`. Keeps `∅` when it arises.
    pub fn meet(&self, other: &Covering) -> Result<Covering> {
        self.same_index(other)?;
        let members = self
            .members
            .iter()
            .flat_map(|&a| other.members.iter().map(move |&b| a.intersection(b)))
            .collect();
        Ok(Self::from_sorted(self.index.clone(), members))
    }

    /// Downward closure in the power set of the index set.
    pub fn saturate(&self) -> Covering {
        let members = self.members.iter().flat_map(|m| m.subsets()).collect();
        Self::from_sorted(self.index.clone(), members)
    }

    pub fn is_saturated(&self) -> bool {
        self.members
            .iter()
            .all(|m| m.subsets().all(|s| self.contains(s)))
    }

    /// Maximal members, in canonical order.
    pub fn canonical(&self) -> Antichain {
        let maximal: Vec<Subset> = self
            .members
            .iter()
            .copied()
            .filter(|&a| {
                !self
                    .members
                    .iter()
                    .any(|&b| b != a && a.is_subset_of(b))
            })
            .collect();
        Antichain::from_maximal(self.index.clone(), maximal)
    }

    /// Left fold of [`Covering::meet`] over a non-empty family.
    pub fn family_meet<'a, I>(family: I) -> Result<Covering>
    where
        I: IntoIterator<Item = &'a Covering>,
    {
        let mut iter = family.into_iter();
        let first = iter.next().ok_or(Error::EmptyFamily)?.clone();
        iter.try_fold(first, |acc, c| acc.meet(c))
    }

    pub fn label_members(&self) -> Vec<Vec<String>> {
        self.members
            .iter()
            .map(|&m| self.index.subset_labels(m))
            .collect()
    }
}

fn fmt_members(f: &mut fmt::Formatter<'_>, index: &IndexSet, members: &[Subset]) -> fmt::Result {
    f.write_str("{")?;
    for (k, &m) in members.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        f.write_str(&index.format_subset(m))?;
    }
    f.write_str("}")
}

impl fmt::Display for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_members(f, &self.index, &self.members)
    }
}

impl fmt::Debug for Covering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Covering{self}")
    }
}

/// Pairwise incomparable subsets in canonical order; the representative of an
/// equivalence class of coverings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Antichain {
    index: IndexSet,
    members: Vec<Subset>,
}

impl Antichain {
    fn from_maximal(index: IndexSet, mut members: Vec<Subset>) -> Self {
        members.sort_by(Subset::canonical_cmp);
        members.dedup();
        Antichain { index, members }
    }

    /// The antichain of maximal elements of `members`.
    pub fn new<I: IntoIterator<Item = Subset>>(index: &IndexSet, members: I) -> Result<Self> {
        Ok(Covering::new(index, members)?.canonical())
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index
    }

    pub fn to_covering(&self) -> Covering {
        Covering::from_sorted(self.index.clone(), self.members.clone())
    }

    pub fn saturation(&self) -> Covering {
        self.to_covering().saturate()
    }

    pub fn leq(&self, other: &Antichain) -> Result<bool> {
        self.to_covering().leq(&other.to_covering())
    }

    pub fn label_members(&self) -> Vec<Vec<String>> {
        self.members
            .iter()
            .map(|&m| self.index.subset_labels(m))
            .collect()
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_members(f, &self.index, &self.members)
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Antichain{self}")
    }
}

/// Every antichain of the power set of `index` (one per down-set), including
/// the empty antichain and `{∅}`. There are 3, 6, 20, 168, 7581 of them for
/// n = 1..=5.
///
/// # Panics
///
/// If the index set has more than 6 labels.
pub fn all_antichains(index: &IndexSet) -> Vec<Antichain> {
    let n = index.len();
    assert!(n <= 6, "antichain enumeration is limited to 6 labels");
    let subsets = 1usize << n;
    let mut out = Vec::new();
    let mut chosen = vec![false; subsets];
    down_sets(n, 0, &mut chosen, &mut |chosen| {
        let down: Vec<Subset> = (0..subsets)
            .filter(|&s| chosen[s])
            .map(|s| Subset::from_bits(s as u64))
            .collect();
        let cov = Covering::from_sorted(index.clone(), down);
        out.push(cov.canonical());
    });
    out
}

// Subsets are visited in numeric order, which extends inclusion, so a subset
// may join the down-set only once all its one-smaller subsets have.
fn down_sets(n: usize, s: usize, chosen: &mut [bool], emit: &mut impl FnMut(&[bool])) {
    if s == chosen.len() {
        emit(chosen);
        return;
    }
    down_sets(n, s + 1, chosen, emit);
    let closed = (0..n)
        .filter(|&i| s & (1 << i) != 0)
        .all(|i| chosen[s & !(1 << i)]);
    if closed {
        chosen[s] = true;
        down_sets(n, s + 1, chosen, emit);
        chosen[s] = false;
    }
}

/// JSON form: `{"index_set": ["1","2"], "members": [["1"],["2"]]}`, `∅` as `[]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoveringJson {
    pub index_set: Vec<String>,
    pub members: Vec<Vec<String>>,
}

impl CoveringJson {
    pub fn into_covering(self) -> Result<Covering> {
        let index = IndexSet::new(self.index_set)?;
        Covering::from_labels(&index, self.members)
    }
}

impl From<&Covering> for CoveringJson {
    fn from(c: &Covering) -> Self {
        CoveringJson {
            index_set: c.index.labels().to_vec(),
            members: c.label_members(),
        }
    }
}

impl From<&Antichain> for CoveringJson {
    fn from(a: &Antichain) -> Self {
        CoveringJson {
            index_set: a.index.labels().to_vec(),
            members: a.label_members(),
        }
    }
}

impl Covering {
    pub fn from_json(text: &str) -> Result<Covering> {
        serde_json::from_str::<CoveringJson>(text)?.into_covering()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CoveringJson::from(self)).expect("covering serializes")
    }
}
