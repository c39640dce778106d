//! Quantum calculus of probabilities: the Born rule, Lüders' projective state
//! update, conditional probabilities on composite systems, partial-trace
//! marginals, Schmidt analysis of pure bipartite states, compatibility and
//! joint refinement of commuting observables.

mod observable;
mod ops;
mod refinement;
mod state;

pub(crate) use observable::commutator_norm;
pub use observable::{compatible, compatible_with, embed, Observable};
pub use ops::{
    bipartite_luders_update, born_probability, conditional_probability, is_separable_pure,
    is_separable_pure_with, joint_distribution, luders_update, luders_update_at, marginal_state,
    outcome_distribution, site_probability, JointDistribution, OutcomeDistribution,
    SchmidtAnalysis,
};
pub(crate) use ops::{check_site, local_weight};
pub use refinement::{joint_refinement, JointRefinement, OutcomeMap};
pub use state::{QuantumState, StateKind};
