//! Coalgebraic bisimulations and order-parameterized simulations for finite
//! transition systems: plain, multiset, probabilistic, distribution and
//! alternating kinds, plus the natural transformations between them.

pub mod distribution;
pub mod equivalences;
pub mod error;
pub mod flow;
pub mod format;
pub mod lifting;
pub mod model;
pub mod multiset;
pub mod order;
pub mod rat;
pub mod samples;
pub mod transforms;
pub mod verify;

pub use distribution::Distribution;
pub use error::{Error, Result};
pub use lifting::{lift_dist_subsets_member, lift_member, lift_ordered_member, Coupling, Elem, LiftVerdict};
pub use model::{disjoint_union, validate_system, Bundle, Diagnostic, Kind, Partition, Relation, StateTag, System};
pub use multiset::Multiset;
pub use order::{ExtensionalOrder, OrderSpec};
pub use rat::Rat;
pub use transforms::AlphaKind;
pub use equivalences::{
    bisimilarity, is_bisimulation, is_prob_bisimulation, is_simulation, largest_simulation, prob_bisimilarity,
    Counterexample, Verdict,
};
pub use verify::{run_check, run_fixture_suite, CheckReport, GenParams, PropertyId};
