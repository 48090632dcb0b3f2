//! Synthetic partial-permutation synchronisation instances parameterised by
//! universe size `d`, object count `k`, observation rate `ρ` and error rate `σ`.
//!
//! 1. Each object observes every universe point independently with
//!    probability `ρ` (redrawn if it observes nothing); its rows are the
//!    observed points in random order.
//! 2. Ground-truth blocks are `P_ij = P_i P_jᵀ` for `i < j`.
//! 3. Each correspondence of each block is, with probability `σ`, moved to a
//!    uniformly chosen column of object `j` that is currently unmatched in
//!    the block, or dropped if there is none. `P_ji` is the transpose.
//!
//! Randomness comes from ChaCha8 seeded with `seed`, so instances are
//! reproducible across platforms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sync::{PairwiseMatchSet, UniverseMatching};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub d: usize,
    pub k: usize,
    pub rho: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidConfig(format!(
                "d must be at least 2, got {}",
                self.d
            )));
        }
        if self.k < 2 {
            return Err(Error::InvalidConfig(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rho must lie in (0, 1], got {}",
                self.rho
            )));
        }
        if !(self.sigma >= 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sigma must lie in [0, 1), got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Counts from the corruption step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionStats {
    /// Ground-truth correspondences over all blocks `i < j`.
    pub ground_truth: usize,
    pub rematched: usize,
    pub dropped: usize,
}

impl CorruptionStats {
    pub fn corrupted(&self) -> usize {
        self.rematched + self.dropped
    }

    pub fn corrupted_fraction(&self) -> f64 {
        if self.ground_truth == 0 {
            0.0
        } else {
            self.corrupted() as f64 / self.ground_truth as f64
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticInstance {
    pub ground_truth: UniverseMatching,
    pub noisy: PairwiseMatchSet,
    pub gen: GenConfig,
    pub stats: CorruptionStats,
}

pub fn generate_instance(gen: &GenConfig) -> Result<SyntheticInstance> {
    gen.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);

    let mut assignments = Vec::with_capacity(gen.k);
    for _ in 0..gen.k {
        let mut observed = Vec::new();
        while observed.is_empty() {
            observed = (0..gen.d)
                .filter(|_| rng.random::<f64>() < gen.rho)
                .collect();
        }
        observed.shuffle(&mut rng);
        assignments.push(observed);
    }
    let ground_truth = UniverseMatching::new(gen.d, assignments)?;

    let mut noisy =
        PairwiseMatchSet::new(ground_truth.assignments().iter().map(Vec::len).collect())?;
    let mut stats = CorruptionStats::default();
    for i in 0..gen.k {
        for j in (i + 1)..gen.k {
            let truth = ground_truth.derive_pairwise(i, j);
            stats.ground_truth += truth.len();
            let block = corrupt_block(
                &mut rng,
                &truth,
                ground_truth.assignment(j).len(),
                gen.sigma,
                &mut stats,
            );
            noisy.insert(i, j, block)?;
        }
    }

    Ok(SyntheticInstance {
        ground_truth,
        noisy,
        gen: *gen,
        stats,
    })
}

fn corrupt_block(
    rng: &mut ChaCha8Rng,
    truth: &[(usize, usize)],
    cols: usize,
    sigma: f64,
    stats: &mut CorruptionStats,
) -> Vec<(usize, usize)> {
    let mut col_used = vec![false; cols];
    for &(_, b) in truth {
        col_used[b] = true;
    }
    let mut out = Vec::with_capacity(truth.len());
    for &(a, b) in truth {
        if rng.random::<f64>() >= sigma {
            out.push((a, b));
            continue;
        }
        let free: Vec<usize> = (0..cols).filter(|&c| !col_used[c]).collect();
        col_used[b] = false;
        if free.is_empty() {
            stats.dropped += 1;
        } else {
            let c = free[rng.random_range(0..free.len())];
            col_used[c] = true;
            out.push((a, c));
            stats.rematched += 1;
        }
    }
    out
}
