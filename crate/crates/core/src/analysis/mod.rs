//! Interlacing, majorization and rank-robustness statements about phases,
//! each paired with a constructive check.

pub mod cones;
pub mod controls;
pub mod interlacing;
pub mod kron;
pub mod product;

pub use cones::{
    adversarial_b, adversarial_b_at, cone_membership, i_plus_ab_singular_values, magnitude_breaker,
    mixed_margin_check, phases_in_principal_range, rank_margin, rank_verdict, rotated_certificate, sample_ball, sample_compound_cone,
    top_singular_breaker, AdversarialB, BindingSide, ConeMembership, ConeSpec, MarginReport, MixedMarginReport,
    RankVerdict,
};
pub use controls::{
    find_eigenphase_entrywise_counterexample, find_product_phase_counterexample, hadamard_counterexample_matrix,
    Counterexample,
};
pub use interlacing::{
    compress, compression_phase_sum, extremal_phase_sums, interlaces, schur_complement, schur_complement_matrix,
    ExtremalSums, InterlacingReport, INTERLACE_TOL,
};
pub use kron::{hadamard_phase_bounds, kronecker_phases, HadamardReport, KroneckerReport};
pub use product::{branch_angles, product_phase_check, ProductReport, BRANCH_CUT_TOL};
