use crate::error::{Error, Result};
use crate::lap::solve_max_assignment;
use crate::linalg::{symmetrize_psd, DenseMatrix, ProblemMatrix, StiefelPoint};
use crate::metrics::matching_objective;
use crate::scalar::Scalar;
use crate::stiefel::{initial_point, solve, SolveReport, SolverConfig};
use crate::sync::{PairwiseMatchSet, UniverseMatching};

#[derive(Clone, Debug)]
pub struct SyncResult<T> {
    pub universe: UniverseMatching,
    pub report: SolveReport<T>,
    /// `Σ_{i,j} tr(P_ijᵀ P_i P_jᵀ)` over all ordered pairs, diagonal included.
    pub matching_objective: f64,
    /// `matching_objective / k²`.
    pub normalized_objective: f64,
}

/// Block matrix `W = [P_ij]` with identity diagonal blocks, symmetrised and
/// shifted to be positive semidefinite.
pub fn build_w<T: Scalar>(matches: &PairwiseMatchSet) -> Result<ProblemMatrix<T>> {
    let m = matches.total_points();
    let offsets = matches.offsets();
    let mut w = DenseMatrix::<T>::zeros(m, m);
    for i in 0..m {
        w[(i, i)] = T::one();
    }
    for ((i, j), block) in matches.iter_stored() {
        for &(a, b) in block {
            w[(offsets[i] + a, offsets[j] + b)] = T::one();
            if matches.stored(j, i).is_none() {
                w[(offsets[j] + b, offsets[i] + a)] = T::one();
            }
        }
    }
    symmetrize_psd(&w)?.with_block_sizes(matches.block_sizes().to_vec())
}

/// Euclidean projection of each row block of `U` onto partial permutations
/// with every row assigned, via a linear assignment per block.
pub fn project_to_universe<T: Scalar>(
    u: &StiefelPoint<T>,
    block_sizes: &[usize],
) -> Result<UniverseMatching> {
    let d = u.d();
    let total: usize = block_sizes.iter().sum();
    if total != u.m() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} rows", total),
            found: format!("{} rows", u.m()),
        });
    }
    let mut start = 0;
    let mut assignments = Vec::with_capacity(block_sizes.len());
    for (object, &mi) in block_sizes.iter().enumerate() {
        if mi > d {
            return Err(Error::UniverseTooSmall {
                object,
                points: mi,
                d,
            });
        }
        let block = u.row_block(start, mi);
        assignments.push(solve_max_assignment(&block)?.row_to_col);
        start += mi;
    }
    UniverseMatching::new(d, assignments)
}

fn check_universe_size(block_sizes: &[usize], d: usize) -> Result<()> {
    if let Some((object, &points)) = block_sizes.iter().enumerate().find(|(_, &m)| m > d) {
        return Err(Error::UniverseTooSmall { object, points, d });
    }
    let m: usize = block_sizes.iter().sum();
    if d > m {
        return Err(Error::UniverseTooLarge { d, m });
    }
    Ok(())
}

/// Spectral synchronisation: solve `max tr(UᵀWU)` over `St(m, d)` with the
/// configured method, then project each object's block to a universe
/// assignment.
pub fn synchronise<T: Scalar>(
    matches: &PairwiseMatchSet,
    d: usize,
    cfg: &SolverConfig<T>,
) -> Result<SyncResult<T>> {
    let sizes = matches.block_sizes();
    check_universe_size(sizes, d)?;
    let w = build_w::<T>(matches)?;
    let u0 = initial_point(w.m(), d, cfg.seed)?;
    let report = solve(&w, &u0, cfg)?;
    let universe = project_to_universe(&report.u_star, sizes)?;
    let objective = matching_objective(matches, &universe)?;
    Ok(SyncResult {
        universe,
        report,
        matching_objective: objective.raw,
        normalized_objective: objective.normalized,
    })
}
