//! Solvers for `max tr(UᵀWU)` over `St(m, d)` that return a sparse
//! representative of the optimal subspace.

mod config;
mod objective;
mod solver;

pub use config::{IterationRecord, Method, SolveReport, SolverConfig, StepNorm, StepRule};
pub use objective::{
    build_z, h_matrix, objective_f, objective_g, skew_gradient, step_size, step_size_with,
};
pub use solver::{
    initial_point, orthogonal_iteration, orthogonal_iteration_observed, rotation_refinement,
    rotation_refinement_observed, rotation_step, solve, solve_seeded, sparse_orthogonal_iteration,
    sparse_orthogonal_iteration_observed, sparse_step, two_stage_solve, two_stage_solve_observed,
    Observer, MAX_HALVINGS,
};
