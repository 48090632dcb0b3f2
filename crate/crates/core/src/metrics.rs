//! Precision / recall / fscore of pairwise correspondences, and the
//! synchronisation objective.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Result};
use crate::sync::{PairwiseSource, UniverseMatching};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub fscore: f64,
    pub true_positives: usize,
    pub predicted_count: usize,
    pub gt_count: usize,
}

impl EvalReport {
    fn from_counts(true_positives: usize, predicted_count: usize, gt_count: usize) -> Self {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(true_positives, predicted_count);
        let recall = ratio(true_positives, gt_count);
        let fscore = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            precision,
            recall,
            fscore,
            true_positives,
            predicted_count,
            gt_count,
        }
    }
}

fn check_sizes(a: &impl PairwiseSource, b: &impl PairwiseSource) -> Result<Vec<usize>> {
    let (sa, sb) = (a.block_sizes(), b.block_sizes());
    if sa != sb {
        return Err(shape_err(format!("block sizes {sb:?}"), format!("{sa:?}")));
    }
    Ok(sa)
}

/// Scores predicted correspondences against the ground truth over all
/// unordered object pairs `i < j`. Self-pairs are excluded.
pub fn evaluate<P: PairwiseSource>(predicted: &P, gt: &UniverseMatching) -> Result<EvalReport> {
    let k = check_sizes(predicted, gt)?.len();
    let (mut tp, mut n_pred, mut n_gt) = (0, 0, 0);
    for i in 0..k {
        for j in (i + 1)..k {
            let truth: HashSet<(usize, usize)> = gt.derive_pairwise(i, j).into_iter().collect();
            let pred = predicted.pair(i, j);
            tp += pred.iter().filter(|c| truth.contains(c)).count();
            n_pred += pred.len();
            n_gt += truth.len();
        }
    }
    Ok(EvalReport::from_counts(tp, n_pred, n_gt))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncObjective {
    pub raw: f64,
    /// `raw / k²`.
    pub normalized: f64,
}

/// `Σ_{i,j} tr(P_ijᵀ P_i P_jᵀ)` over all ordered pairs including `i = j`:
/// the number of input correspondences the universe matching reproduces.
pub fn matching_objective<P: PairwiseSource>(
    matches: &P,
    universe: &UniverseMatching,
) -> Result<SyncObjective> {
    let k = check_sizes(matches, universe)?.len();
    let mut raw = 0usize;
    for i in 0..k {
        for j in 0..k {
            let derived: HashSet<(usize, usize)> =
                universe.derive_pairwise(i, j).into_iter().collect();
            raw += matches
                .pair(i, j)
                .iter()
                .filter(|c| derived.contains(c))
                .count();
        }
    }
    let raw = raw as f64;
    let normalized = if k == 0 { 0.0 } else { raw / (k * k) as f64 };
    Ok(SyncObjective { raw, normalized })
}
