//! Sparse globally-optimal solutions of `max tr(UᵀWU)` over the Stiefel
//! manifold, and their use for permutation synchronisation.
//!
//! Orthogonal Iteration finds the dominant `d`-dimensional subspace of a
//! symmetric PSD matrix `W`, which maximises `tr(UᵀWU)` over all `U` with
//! orthonormal columns. Every rotation `UQ` of an optimum is again optimal,
//! so the sparse variant multiplies each iterate by `Z(U) = I + α(h − hᵀ)`,
//! a first-order ascent step on `g(U) = Σ U_ij^p`, before
//! re-orthonormalising. The subspace sequence is unchanged (and so is the
//! convergence guarantee), but the basis it converges to is sparse and, for
//! odd `p`, mostly nonnegative.
//!
//! For synchronisation, `W` stacks the pairwise partial permutations
//! between `k` objects; each row block of the solution is projected to an
//! object-to-universe assignment with a linear assignment solver, which
//! yields cycle-consistent matches.
//!
//! The numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.
//!
//! ```
//! use stiefelsync::datagen::{generate_instance, GenConfig};
//! use stiefelsync::metrics::evaluate;
//! use stiefelsync::{synchronise, Config};
//!
//! let inst = generate_instance(&GenConfig { d: 8, k: 4, rho: 1.0, sigma: 0.0, seed: 1 }).unwrap();
//! let res = synchronise(&inst.noisy, 8, &Config::default()).unwrap();
//! assert_eq!(evaluate(&res.universe, &inst.ground_truth).unwrap().fscore, 1.0);
//! ```

pub mod datagen;
pub mod error;
pub mod lap;
pub mod linalg;
pub mod metrics;
mod scalar;
pub mod stiefel;
pub mod sync;

pub use error::{Error, Result};
pub use lap::{brute_force_assignment, solve_max_assignment, Assignment};
pub use linalg::{
    eigen_oracle, subspace_distance, symmetric_eigen, symmetrize_psd, thin_qr_unique, DenseMatrix,
    ProblemMatrix, StiefelPoint, SymmetricEigen,
};
pub use scalar::Scalar;
pub use stiefel::{
    build_z, h_matrix, initial_point, objective_f, objective_g, orthogonal_iteration,
    rotation_refinement, solve, solve_seeded, sparse_orthogonal_iteration, step_size,
    two_stage_solve, Method, SolveReport, SolverConfig, StepNorm, StepRule,
};
pub use sync::{
    build_w, check_cycle_consistency, project_to_universe, synchronise, PairwiseMatchSet,
    PairwiseSource, SyncResult, UniverseMatching,
};

pub type Matrix = DenseMatrix<f64>;
pub type Stiefel = StiefelPoint<f64>;
pub type Problem = ProblemMatrix<f64>;
pub type Config = SolverConfig<f64>;
pub type Report = SolveReport<f64>;
pub type Sync = SyncResult<f64>;

pub type Matrix32 = DenseMatrix<f32>;
pub type Stiefel32 = StiefelPoint<f32>;
pub type Problem32 = ProblemMatrix<f32>;
pub type Config32 = SolverConfig<f32>;
