//! JSON match files:
//!
//! ```json
//! {"block_sizes": [3, 3], "matches": [{"i": 0, "j": 1, "rows": [0, 1], "cols": [1, 0]}]}
//! ```
//!
//! Indices are 0-based. Each entry is the block `P_ij`; the transpose
//! `P_ji` is implied unless given explicitly.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use stiefelsync::PairwiseMatchSet;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchFile {
    pub block_sizes: Vec<usize>,
    #[serde(default)]
    pub matches: Vec<MatchEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchEntry {
    pub i: usize,
    pub j: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MatchFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("malformed match file")
    }

    pub fn into_match_set(self) -> Result<PairwiseMatchSet> {
        let mut set = PairwiseMatchSet::new(self.block_sizes)?;
        for (n, e) in self.matches.into_iter().enumerate() {
            if e.rows.len() != e.cols.len() {
                bail!(
                    "match entry {n} ({}, {}) has {} rows but {} cols",
                    e.i,
                    e.j,
                    e.rows.len(),
                    e.cols.len()
                );
            }
            if set.stored(e.i, e.j).is_some() {
                bail!("match entry {n} repeats the pair ({}, {})", e.i, e.j);
            }
            let pairs = e.rows.into_iter().zip(e.cols).collect();
            set.insert(e.i, e.j, pairs)
                .with_context(|| format!("match entry {n}"))?;
        }
        Ok(set)
    }

    #[cfg(test)]
    pub fn from_match_set(set: &PairwiseMatchSet) -> Self {
        let matches = set
            .iter_stored()
            .map(|((i, j), block)| MatchEntry {
                i,
                j,
                rows: block.iter().map(|p| p.0).collect(),
                cols: block.iter().map(|p| p.1).collect(),
            })
            .collect();
        Self {
            block_sizes: set.block_sizes().to_vec(),
            matches,
        }
    }
}
