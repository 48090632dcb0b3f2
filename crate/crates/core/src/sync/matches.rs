use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::sync::PairwiseSource;

/// Noisy pairwise partial permutations `{P_ij}` between `k` objects.
///
/// Each stored block is a list of `(row, col)` correspondences between
/// points of object `i` and object `j`. When only `(i, j)` is stored,
/// `P_ji` reads as its transpose. Both directions may be stored, in which
/// case they may disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatchSet {
    block_sizes: Vec<usize>,
    blocks: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
}

impl PairwiseMatchSet {
    pub fn new(block_sizes: Vec<usize>) -> Result<Self> {
        if let Some(i) = block_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidMatch {
                i,
                j: i,
                reason: "object has no points".into(),
            });
        }
        Ok(Self {
            block_sizes,
            blocks: BTreeMap::new(),
        })
    }

    /// Stores `P_ij`, replacing any previous block for the ordered pair.
    pub fn insert(&mut self, i: usize, j: usize, mut pairs: Vec<(usize, usize)>) -> Result<()> {
        let k = self.k();
        let bad = |reason: String| Error::InvalidMatch { i, j, reason };
        if i >= k || j >= k {
            return Err(bad(format!("object index out of range for k = {k}")));
        }
        if i == j {
            return Err(bad("diagonal blocks are fixed to the identity".into()));
        }
        let (mi, mj) = (self.block_sizes[i], self.block_sizes[j]);
        let mut row_seen = vec![false; mi];
        let mut col_seen = vec![false; mj];
        for &(a, b) in &pairs {
            if a >= mi || b >= mj {
                return Err(bad(format!("correspondence ({a}, {b}) outside {mi}x{mj}")));
            }
            if std::mem::replace(&mut row_seen[a], true) {
                return Err(bad(format!("row {a} matched twice")));
            }
            if std::mem::replace(&mut col_seen[b], true) {
                return Err(bad(format!("column {b} matched twice")));
            }
        }
        pairs.sort_unstable();
        self.blocks.insert((i, j), pairs);
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn total_points(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Row offset of each object in the stacked `m×m` matrix.
    pub fn offsets(&self) -> Vec<usize> {
        offsets(&self.block_sizes)
    }

    pub fn stored(&self, i: usize, j: usize) -> Option<&[(usize, usize)]> {
        self.blocks.get(&(i, j)).map(Vec::as_slice)
    }

    pub fn iter_stored(&self) -> impl Iterator<Item = ((usize, usize), &[(usize, usize)])> {
        self.blocks.iter().map(|(&key, v)| (key, v.as_slice()))
    }

    /// `P_ij` as sorted correspondences. `P_ii` is the identity; a missing
    /// block reads as the transpose of `P_ji`, or empty.
    pub fn block(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        if i == j {
            return (0..self.block_sizes[i]).map(|a| (a, a)).collect();
        }
        if let Some(v) = self.blocks.get(&(i, j)) {
            return v.clone();
        }
        match self.blocks.get(&(j, i)) {
            Some(v) => {
                let mut t: Vec<_> = v.iter().map(|&(a, b)| (b, a)).collect();
                t.sort_unstable();
                t
            }
            None => Vec::new(),
        }
    }
}

impl PairwiseSource for PairwiseMatchSet {
    fn block_sizes(&self) -> Vec<usize> {
        self.block_sizes.clone()
    }

    fn pair(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.block(i, j)
    }
}

pub(crate) fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}
