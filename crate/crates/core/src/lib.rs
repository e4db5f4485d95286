//! Exact solvers, quantum strategy evaluation, and machine verification for
//! binary two-agent static team decision problems.
//!
//! Two agents with private binary observations pick binary actions to
//! minimize a shared expected cost built from a pair of {0, −1} matrices, a
//! joint prior, and a world-bit weight χ. The crate provides:
//!
//! * the problem model and exact expected costs ([`team`]),
//! * the 256-class superstructure of cost pairs, its symmetry group, and the
//!   classification of every class as quantum-advantage-prone or not
//!   ([`superstructure`]),
//! * optimal values over deterministic/local and no-signalling policies, plus
//!   membership in the local polytope ([`polytopes`]),
//! * quantum strategies, their occupation measures, the explicit advantage
//!   witness, and a see-saw optimizer ([`quantum`]),
//! * a machine audit of the classification over randomized instances
//!   ([`verification`]), and
//! * JSON import/export for instances, strategies, and reports ([`io`]).
//!
//! Classical values are computed generically over [`scalar::Scalar`], so the
//! same code path runs with exact rationals or doubles.

pub mod io;
pub mod polytopes;
pub mod quantum;
pub mod scalar;
mod simplex;
pub mod superstructure;
pub mod team;
pub mod verification;

pub use polytopes::{
    chsh_value, deterministic_vertex, is_no_signalling, local_membership, local_optimum,
    ns_optimum, ns_vertex, DeterministicVertexLabel, LocalMembership, NoSignallingVertexLabel,
    NsArgmin,
};
pub use quantum::{
    embed_deterministic, half_cac_witness, occupation_measure, quantum_cost, random_strategy,
    transport_strategy, validate_strategy, QuantumStrategy,
};
pub use scalar::{Rat64, Scalar};
pub use superstructure::{
    apply_action, cac_form, classify, classify_cell, enumerate_classes, half_cac_form,
    mn_signature, orbit, orbit_paths, theorem_predicate, transport_instance, transport_policy,
    Cell, ClassificationRecord, GroupAction, Verdict,
};
pub use team::{
    make_instance, make_instance_with_labels, ActionLabels, BinaryCostPair, CentralizedArgmin,
    ConditionalPolicy, JointPrior, ProblemInstance, TeamError,
};
pub use verification::{
    audit_chi_grid, audit_theorem, cac_advantage_search, check_c13_cost_consequence,
    check_c13_decomposition, check_c13_decomposition_mutated,
    check_decomposition_negative_controls, check_null_elimination, check_overlap_elimination,
    check_vertex_bound, default_chi_grid, sample_prior, AdvantageExhibit, AuditReport,
    BooleanDecomposition, CheckOutcome, ClassAuditRecord, Counterexample, VertexBoundFamily,
};
