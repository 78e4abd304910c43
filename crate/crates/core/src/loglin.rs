//! Log-linear cylinder subspaces.
//!
//! In the log domain a positive function that factors through `x ↦ x_a` is a
//! vector of the span of the indicator columns `1[x_a = ξ]`, `ξ ∈ E_a`. The
//! sum of these spans over the members of a covering is the log image of the
//! factorisation space of that covering; membership of a table is decided by
//! the least-squares residual of its log against that span.
//!
//! Bases keep the raw indicator columns, which are linearly dependent as soon
//! as two members overlap. Every dimension below comes from a spectral
//! decomposition, never from a column count. Singular vectors are taken from
//! the symmetric eigenproblem of the Gram matrix: nalgebra's thin SVD returns
//! wrong left vectors on tall rank-deficient indicator matrices.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::covering::{Antichain, Covering, Subset};
use crate::error::{Error, Result};
use crate::state::{PartialState, StateSpace, StateSpaceJson};

/// Default membership tolerance, relative on the log scale.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Largest `|E|` for which dense subspaces are materialized.
pub const MAX_DENSE_STATES: usize = 4096;

/// Singular values below `RANK_RTOL · σ_max` count as zero.
const RANK_RTOL: f64 = 1e-6;

/// A strictly positive function on a state space, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveTable {
    space: StateSpace,
    values: Vec<f64>,
}

impl PositiveTable {
    pub fn new(space: &StateSpace, values: Vec<f64>) -> Result<Self> {
        let expected = space.state_count();
        if values.len() != expected {
            return Err(Error::TableLength {
                expected,
                found: values.len(),
            });
        }
        check_positive(&values)?;
        Ok(PositiveTable {
            space: space.clone(),
            values,
        })
    }

    pub fn constant(space: &StateSpace, c: f64) -> Result<Self> {
        Self::new(space, vec![c; space.state_count()])
    }

    /// `exp` of a log-table.
    pub fn from_log(space: &StateSpace, logs: &[f64]) -> Result<Self> {
        Self::new(space, logs.iter().map(|v| v.exp()).collect())
    }

    /// Evaluates `f` on the digit vector of every configuration.
    pub fn from_fn(space: &StateSpace, mut f: impl FnMut(&[u32]) -> f64) -> Result<Self> {
        let values = (0..space.state_count())
            .map(|k| f(&space.decode(k)))
            .collect();
        Self::new(space, values)
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn log_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.ln()).collect()
    }

    /// Value at a full configuration.
    pub fn get(&self, x: &PartialState) -> Result<f64> {
        if x.domain() != self.space.index_set().full() {
            return Err(Error::RestrictionOutsideDomain);
        }
        self.space.validate(x)?;
        Ok(self.values[self.space.flat_index(x)])
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `max_x |f(x) - g(x)| / |g(x)|`.
    pub fn max_rel_diff(&self, other: &PositiveTable) -> Result<f64> {
        if self.space != other.space {
            return Err(Error::IndexSetMismatch);
        }
        Ok(max_rel_diff(&self.values, &other.values))
    }

    pub fn scaled(&self, c: f64) -> Result<PositiveTable> {
        Self::new(&self.space, self.values.iter().map(|v| v * c).collect())
    }
}

pub(crate) fn check_positive(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        Some(position) => Err(Error::NotStrictlyPositive {
            position,
            value: values[position],
        }),
        None => Ok(()),
    }
}

pub(crate) fn max_rel_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| ((x - y) / y).abs())
        .fold(0.0, f64::max)
}

/// JSON form: `{"space": {"alphabets": {...}}, "values": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableJson {
    pub space: StateSpaceJson,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
}

impl TableJson {
    pub fn into_table(self) -> Result<PositiveTable> {
        let space = self.space.into_space()?;
        PositiveTable::new(&space, self.values)
    }
}

impl PositiveTable {
    pub fn from_json(text: &str) -> Result<PositiveTable> {
        serde_json::from_str::<TableJson>(text)?.into_table()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson {
            space: StateSpaceJson::from(&self.space),
            values: self.values.clone(),
            normalized: None,
        })
        .expect("table serializes")
    }
}

/// Outcome of a membership test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// `‖r‖_∞` of the least-squares residual of the log-table.
    pub residual: f64,
    /// `1 + ‖log f‖_∞`.
    pub scale: f64,
}

impl Membership {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// The log-linear span of the cylinder indicators of a covering.
#[derive(Clone, Debug)]
pub struct CylinderSubspace {
    space: StateSpace,
    covering: Antichain,
    basis: DMatrix<f64>,
    // orthonormal basis of the column span of `basis`
    range: DMatrix<f64>,
    tol: f64,
}

impl CylinderSubspace {
    /// The empty covering is treated as `{∅}`, the constants.
    pub fn build(space: &StateSpace, covering: &Covering) -> Result<Self> {
        if covering.index_set() != space.index_set() {
            return Err(Error::IndexSetMismatch);
        }
        let n_states = space.state_count();
        if n_states > MAX_DENSE_STATES {
            return Err(Error::StateCountOverflow(
                n_states as u128,
                MAX_DENSE_STATES as u128,
            ));
        }
        let canonical = if covering.is_empty() {
            Covering::constants(space.index_set()).canonical()
        } else {
            covering.canonical()
        };
        let n_cols: usize = canonical.members().iter().map(|&a| space.count(a)).sum();
        let mut basis = DMatrix::zeros(n_states, n_cols);
        let mut offset = 0;
        for &a in canonical.members() {
            for (k, xi) in space.projection(a).into_iter().enumerate() {
                basis[(k, offset + xi)] = 1.0;
            }
            offset += space.count(a);
        }
        let range = orthonormal_range(&basis);
        Ok(CylinderSubspace {
            space: space.clone(),
            covering: canonical,
            basis,
            range,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn covering(&self) -> &Antichain {
        &self.covering
    }

    /// Raw 0/1 indicator columns, grouped by antichain member.
    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthonormal basis of the span.
    pub fn range(&self) -> &DMatrix<f64> {
        &self.range
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.range.ncols()
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        project_onto(&self.range, v)
    }

    /// Membership of a log-domain vector.
    pub fn contains_vector(&self, v: &[f64]) -> Membership {
        let p = self.project(v);
        let residual = v
            .iter()
            .zip(&p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let scale = 1.0 + v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        Membership {
            member: residual <= self.tol * scale,
            residual,
            scale,
        }
    }

    pub fn member(&self, f: &PositiveTable) -> Result<Membership> {
        if f.space() != &self.space {
            return Err(Error::IndexSetMismatch);
        }
        Ok(self.contains_vector(&f.log_values()))
    }

    /// Whether every basis column of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &CylinderSubspace) -> bool {
        (0..other.range.ncols()).all(|j| {
            let col: Vec<f64> = other.range.column(j).iter().copied().collect();
            self.contains_vector(&col).member
        })
    }
}

fn project_onto(q: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    let v = DVector::from_column_slice(v);
    let coeffs = q.tr_mul(&v);
    (q * coeffs).iter().copied().collect()
}

/// Eigenpairs of `mᵀm` whose singular value clears the rank threshold.
fn gram_eigen(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let eig = m.tr_mul(m).symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cut = top * RANK_RTOL * RANK_RTOL;
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > cut && eig.eigenvalues[i] > 0.0)
        .collect();
    let values = keep.iter().map(|&i| eig.eigenvalues[i]).collect();
    (eig.eigenvectors.select_columns(&keep), values)
}

/// Orthonormal basis of the column span.
pub fn orthonormal_range(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let (v, _) = gram_eigen(m);
    if v.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    // m·v has orthogonal columns of full rank; QR makes them orthonormal to
    // working precision
    (m * v).qr().q()
}

/// Minimum-norm least-squares solution of `m·θ = v`.
pub fn min_norm_solve(m: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    let (vecs, values) = gram_eigen(m);
    let mut coeffs = vecs.tr_mul(&m.tr_mul(v));
    for (c, l) in coeffs.iter_mut().zip(values) {
        *c /= l;
    }
    vecs * coeffs
}

/// Numerical rank by singular values.
pub fn rank(m: &DMatrix<f64>) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let s = m.singular_values();
    let cut = s.iter().copied().fold(0.0, f64::max) * RANK_RTOL;
    s.iter().filter(|&&x| x > cut && x > 0.0).count()
}

/// Orthonormal basis of `⋂ span(S_k)`: the null space of `Σ (I - P_k)`,
/// which is the common fixed space of the projectors.
pub fn intersection_basis(subspaces: &[&CylinderSubspace]) -> DMatrix<f64> {
    let Some(first) = subspaces.first() else {
        return DMatrix::zeros(0, 0);
    };
    let n = first.space.state_count();
    let mut sum = DMatrix::zeros(n, n);
    for s in subspaces {
        sum += DMatrix::identity(n, n) - &s.range * s.range.transpose();
    }
    let eig = sum.symmetric_eigen();
    // eigenvalues of a sum of complement projectors lie in {0} ∪ (0, m];
    // anything this small is a numerically exact null direction
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] < 1e-7).collect();
    eig.eigenvectors.select_columns(&keep)
}

/// Builds the cylinder subspace of `covering` and tests `f` against it.
pub fn member(f: &PositiveTable, covering: &Covering, tol: f64) -> Result<Membership> {
    CylinderSubspace::build(f.space(), covering)?
        .with_tol(tol)
        .member(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionDims {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_sum: usize,
    pub dim_intersection: usize,
}

/// Dimensions of two cylinder spans, their sum and their intersection, from
/// ranks alone: `dim(A ∩ B) = dim A + dim B − dim(A + B)`.
pub fn intersect_oracle(space: &StateSpace, a: &Covering, b: &Covering) -> Result<IntersectionDims> {
    let sa = CylinderSubspace::build(space, a)?;
    let sb = CylinderSubspace::build(space, b)?;
    let dim_a = rank(sa.basis());
    let dim_b = rank(sb.basis());
    let mut joined = DMatrix::zeros(space.state_count(), sa.basis.ncols() + sb.basis.ncols());
    joined
        .view_mut((0, 0), sa.basis.shape())
        .copy_from(&sa.basis);
    joined
        .view_mut((0, sa.basis.ncols()), sb.basis.shape())
        .copy_from(&sb.basis);
    let dim_sum = rank(&joined);
    Ok(IntersectionDims {
        dim_a,
        dim_b,
        dim_sum,
        dim_intersection: dim_a + dim_b - dim_sum,
    })
}

/// Whether two coverings span the same log-linear subspace.
pub fn subspace_equal(space: &StateSpace, a: &Covering, b: &Covering, tol: f64) -> Result<bool> {
    let sa = CylinderSubspace::build(space, a)?.with_tol(tol);
    let sb = CylinderSubspace::build(space, b)?.with_tol(tol);
    Ok(sa.contains_subspace(&sb) && sb.contains_subspace(&sa))
}

/// `Σ_{s ∈ Â} ∏_{i∈s} (|E_i| − 1)`, the dimension predicted by the
/// interaction decomposition. Only used as a cross-check of [`rank`].
pub fn interaction_dimension(space: &StateSpace, covering: &Covering) -> usize {
    let saturated = if covering.is_empty() {
        Covering::constants(covering.index_set()).saturate()
    } else {
        covering.saturate()
    };
    saturated
        .members()
        .iter()
        .map(|&s: &Subset| s.iter().map(|i| space.size(i) - 1).product::<usize>())
        .sum()
}
