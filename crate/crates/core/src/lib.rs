//! Coverings of a finite index set, the factorisation spaces they induce on
//! strictly positive tables, and the Markov and conditional-independence
//! statements that reduce to membership in those spaces.

pub mod ci;
pub mod covering;
pub mod error;
pub mod factorize;
pub mod loglin;
pub mod markov;
pub mod sample;
pub mod state;
pub mod suites;

pub use ci::{graphoid_check, CiResult, GraphoidReport, JointDistribution};
pub use covering::{all_antichains, Antichain, Covering, IndexSet, Subset};
pub use error::{Error, Result};
pub use factorize::{
    extract_factors, graphical_hull, minimal_factorization, refactor_meet, slice_factors, Anchor,
    FactorSystem,
};
pub use loglin::{member, CylinderSubspace, Membership, PositiveTable, DEFAULT_TOL};
pub use markov::{clique_complex, hc_check, markov_test, CliqueComplex, Graph, MarkovMode};
pub use state::{PartialState, StateSpace};
