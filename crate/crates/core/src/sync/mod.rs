//! Permutation synchronisation: pairwise match sets, object-to-universe
//! matchings, and the spectral pipeline between them.

mod consistency;
mod matches;
mod pipeline;
mod universe;

pub use consistency::check_cycle_consistency;
pub use matches::PairwiseMatchSet;
pub use pipeline::{build_w, project_to_universe, synchronise, SyncResult};
pub use universe::UniverseMatching;

/// Anything that yields pairwise blocks `P_ij` over a fixed set of objects.
pub trait PairwiseSource {
    fn block_sizes(&self) -> Vec<usize>;

    /// Correspondences `(row of i, row of j)` of `P_ij`, sorted.
    fn pair(&self, i: usize, j: usize) -> Vec<(usize, usize)>;
}
