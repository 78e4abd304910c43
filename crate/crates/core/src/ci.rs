//! Normalized distributions, marginals, conditionals and conditional
//! independence.
//!
//! `X ⫫ Y | Z` is tested two ways: pointwise, by comparing `P(x,y|z)` with
//! `P(x|z)·P(y|z)`, and as membership of the `(X,Y,Z)` marginal in the
//! factorisation space of `{X∪Z, Y∪Z}`.

use serde::Serialize;

use crate::covering::{Antichain, Covering, Subset};
use crate::error::{Error, Result};
use crate::loglin::{CylinderSubspace, Membership, PositiveTable, TableJson};
use crate::state::{StateSpace, StateSpaceJson};

/// Tolerance on `Σ P = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    table: PositiveTable,
}

impl JointDistribution {
    /// Accepts a table that already sums to 1.
    pub fn new(table: PositiveTable) -> Result<Self> {
        let sum = table.sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(sum));
        }
        Ok(JointDistribution { table })
    }

    /// Divides by the total mass.
    pub fn normalize(table: &PositiveTable) -> Self {
        let sum = table.sum();
        JointDistribution {
            table: table.scaled(1.0 / sum).expect("positive over positive"),
        }
    }

    pub fn uniform(space: &StateSpace) -> Self {
        Self::normalize(&PositiveTable::constant(space, 1.0).expect("positive constant"))
    }

    pub fn table(&self) -> &PositiveTable {
        &self.table
    }

    pub fn space(&self) -> &StateSpace {
        self.table.space()
    }

    /// Marginal on `E_a`, over the labels of `a`.
    pub fn marginal(&self, a: Subset) -> Result<JointDistribution> {
        let space = self.space();
        space.index_set().check(a)?;
        let values = sum_onto(space, self.table.values(), a);
        Ok(JointDistribution {
            table: PositiveTable::new(&space.sub_space(a), values)?,
        })
    }

    /// `P(target | given)` as a table on `E_{target ∪ given}`.
    pub fn conditional(&self, target: Subset, given: Subset) -> Result<PositiveTable> {
        if !target.is_disjoint(given) {
            return Err(Error::OverlappingGroups);
        }
        let joint_on = target.union(given);
        let joint = self.marginal(joint_on)?;
        let sub = joint.space().clone();
        let given_local = given.compress(joint_on);
        let denominator = sum_onto(&sub, joint.table.values(), given_local);
        let values = joint
            .table
            .values()
            .iter()
            .zip(sub.projection(given_local))
            .map(|(p, z)| p / denominator[z])
            .collect();
        PositiveTable::new(&sub, values)
    }

    /// Tests `X ⫫ Y | Z` by both routes.
    pub fn ci_test(&self, x: Subset, y: Subset, z: Subset, tol: f64) -> Result<CiResult> {
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(Error::OverlappingGroups);
        }
        let on = x.union(y).union(z);
        let m = self.marginal(on)?;
        let sub = m.space().clone();
        let (xl, yl, zl) = (x.compress(on), y.compress(on), z.compress(on));

        let mz = sum_onto(&sub, m.table.values(), zl);
        let mxz = sum_onto(&sub, m.table.values(), xl.union(zl));
        let myz = sum_onto(&sub, m.table.values(), yl.union(zl));
        let pz = sub.projection(zl);
        let pxz = sub.projection(xl.union(zl));
        let pyz = sub.projection(yl.union(zl));
        let residual = m
            .table
            .values()
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let den = mz[pz[k]];
                let joint = p / den;
                let product = (mxz[pxz[k]] / den) * (myz[pyz[k]] / den);
                (joint - product).abs()
            })
            .fold(0.0, f64::max);

        let covering = Covering::new(sub.index_set(), [xl.union(zl), yl.union(zl)])?;
        let membership = CylinderSubspace::build(&sub, &covering)?
            .with_tol(tol)
            .member(&m.table)?;
        let independent = residual <= tol;
        Ok(CiResult {
            independent,
            residual,
            membership,
            routes_agree: independent == membership.member,
        })
    }

    pub fn from_json(text: &str) -> Result<JointDistribution> {
        let raw: TableJson = serde_json::from_str(text)?;
        let normalized = raw.normalized.unwrap_or(false);
        let table = raw.into_table()?;
        if normalized {
            Self::new(table)
        } else {
            Ok(Self::normalize(&table))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson {
            space: StateSpaceJson::from(self.space()),
            values: self.table.values().to_vec(),
            normalized: Some(true),
        })
        .expect("distribution serializes")
    }
}

/// Sums a row-major table on `space` onto `E_a`.
fn sum_onto(space: &StateSpace, values: &[f64], a: Subset) -> Vec<f64> {
    let mut out = vec![0.0; space.count(a)];
    for (v, xi) in values.iter().zip(space.projection(a)) {
        out[xi] += v;
    }
    out
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CiResult {
    /// Pointwise route: `max |P(x,y|z) − P(x|z)P(y|z)| ≤ tol`.
    pub independent: bool,
    pub residual: f64,
    /// Factorisation route.
    #[serde(skip)]
    pub membership: Membership,
    pub routes_agree: bool,
}

/// Variables of the four-variable intersection statement, by position.
pub const W: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;
pub const Z: usize = 3;

#[derive(Clone, Debug)]
pub struct GraphoidReport {
    /// `X ⫫ Y | Z,W`
    pub x_y_given_zw: CiResult,
    /// `X ⫫ W | Z,Y`
    pub x_w_given_zy: CiResult,
    /// `X ⫫ Y,W | Z`
    pub x_yw_given_z: CiResult,
    /// Both antecedents hold.
    pub applicable: bool,
    /// The implication holds (vacuously when not applicable).
    pub holds: bool,
    /// `canonical({013,023} ⊓ {023,123})`.
    pub antecedent_meet: Antichain,
    /// The meet is equivalent to the consequent covering `{023,13}`.
    pub meet_is_consequent: bool,
}

/// Checks `(X⫫Y|Z,W) ∧ (X⫫W|Z,Y) ⟹ X⫫Y,W|Z` on a four-variable distribution
/// with W, X, Y, Z at positions 0..4.
pub fn graphoid_check(p: &JointDistribution, tol: f64) -> Result<GraphoidReport> {
    let n = p.space().len();
    if n != 4 {
        return Err(Error::Arity { expected: 4, found: n });
    }
    let s = Subset::singleton;
    let x_y_given_zw = p.ci_test(s(X), s(Y), s(Z).with(W), tol)?;
    let x_w_given_zy = p.ci_test(s(X), s(W), s(Z).with(Y), tol)?;
    let x_yw_given_z = p.ci_test(s(X), s(Y).with(W), s(Z), tol)?;

    let index = p.space().index_set();
    let a = Subset::from_indices([W, X, Z]);
    let b = Subset::from_indices([W, Y, Z]);
    let c = Subset::from_indices([X, Y, Z]);
    let d = Subset::from_indices([X, Z]);
    let meet = Covering::new(index, [a, b])?.meet(&Covering::new(index, [b, c])?)?;
    let meet_is_consequent = meet.equiv(&Covering::new(index, [b, d])?)?;

    let applicable = x_y_given_zw.membership.member && x_w_given_zy.membership.member;
    Ok(GraphoidReport {
        holds: !applicable || x_yw_given_z.membership.member,
        x_y_given_zw,
        x_w_given_zy,
        x_yw_given_z,
        applicable,
        antecedent_meet: meet.canonical(),
        meet_is_consequent,
    })
}
