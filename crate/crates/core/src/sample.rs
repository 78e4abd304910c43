//! Random instances for property checks.
//!
//! Members of an intersection of factorisation spaces are drawn by projecting
//! a standard normal log-table onto the intersection of the spans, which is
//! computed from the spans themselves ([`intersection_basis`]) and never from
//! the meet of the coverings.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::covering::{Covering, IndexSet, Subset};
use crate::error::{Error, Result};
use crate::factorize::FactorSystem;
use crate::loglin::{intersection_basis, CylinderSubspace, PositiveTable};
use crate::state::StateSpace;

pub fn normal_vec<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// `exp` of an i.i.d. standard normal log-table; almost surely outside every
/// proper factorisation space.
pub fn generic_table<R: Rng + ?Sized>(space: &StateSpace, rng: &mut R) -> PositiveTable {
    PositiveTable::from_log(space, &normal_vec(rng, space.state_count()))
        .expect("exponentials are positive")
}

/// Independent log-normal factors on every member of `covering`.
pub fn random_factor_system<R: Rng + ?Sized>(
    space: &StateSpace,
    covering: &Covering,
    rng: &mut R,
) -> Result<FactorSystem> {
    let factors = covering
        .members()
        .iter()
        .map(|&a| normal_vec(rng, space.count(a)).into_iter().map(f64::exp).collect())
        .collect();
    FactorSystem::new(space, covering.clone(), factors)
}

/// A random table lying in every listed factorisation space.
pub fn random_member<R: Rng + ?Sized>(
    space: &StateSpace,
    coverings: &[&Covering],
    rng: &mut R,
) -> Result<PositiveTable> {
    if coverings.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let subspaces = coverings
        .iter()
        .map(|c| CylinderSubspace::build(space, c))
        .collect::<Result<Vec<_>>>()?;
    let basis: DMatrix<f64> = if subspaces.len() == 1 {
        subspaces[0].range().clone()
    } else {
        intersection_basis(&subspaces.iter().collect::<Vec<_>>())
    };
    let v = DVector::from_vec(normal_vec(rng, space.state_count()));
    let projected = &basis * basis.tr_mul(&v);
    PositiveTable::from_log(space, projected.as_slice())
}

/// A covering with between 1 and `max_members` uniformly random subsets.
pub fn random_covering<R: Rng + ?Sized>(index: &IndexSet, max_members: usize, rng: &mut R) -> Covering {
    let count = rng.random_range(1..=max_members.max(1));
    let full = index.full().bits();
    let members = (0..count).map(|_| Subset::from_bits(rng.random::<u64>() & full));
    Covering::new(index, members).expect("masked to the index set")
}
