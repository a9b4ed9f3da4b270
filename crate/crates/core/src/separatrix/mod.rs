//! Near-separatrix and free states: parabolic-barrier and Airy transitional approximations,
//! the phase angle mu, and the modified matching conditions for the eigenvalues.

pub mod actions;
pub mod eigen;
pub mod waves;

pub use actions::{
    barred_action_overdense_inside, barred_action_overdense_outside, barred_action_underdense,
    barrier_integral_overdense, barrier_integral_underdense, inner_turning_point, mu_overdense,
    mu_underdense, phase_count, phase_count_level, t_overdense, t_underdense,
};
pub use eigen::{
    classify, eigenvalue_near_separatrix_underdense, eigenvalue_overdense, eigenvalue_overdense_at,
    expected_offset, join_beam_for, match_overdense, match_underdense, modified_eigenvalue,
    MatchedRoot, SEPARATRIX_T_SWITCH,
};
pub use waves::{
    airy_transitional, alternate_signs, barrier_wave, barrier_wkb_wave, free_eigenvector,
    join_is_clear, matching_sides, recursion_residual, separatrix_eigenvector, separatrix_wave,
    BarrierContext, BarrierSide, JoinPlan,
};
