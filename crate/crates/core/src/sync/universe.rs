use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sync::{PairwiseMatchSet, PairwiseSource};

/// Object-to-universe matchings `{P_i}`: every point of object `i` is sent to
/// a distinct label in `0..d`. Pairwise matches derived from it are
/// cycle-consistent by construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawUniverse")]
pub struct UniverseMatching {
    d: usize,
    assignments: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawUniverse {
    d: usize,
    assignments: Vec<Vec<usize>>,
}

impl TryFrom<RawUniverse> for UniverseMatching {
    type Error = Error;

    fn try_from(raw: RawUniverse) -> Result<Self> {
        Self::new(raw.d, raw.assignments)
    }
}

impl UniverseMatching {
    pub fn new(d: usize, assignments: Vec<Vec<usize>>) -> Result<Self> {
        for (i, rows) in assignments.iter().enumerate() {
            let mut seen = vec![false; d];
            for (a, &u) in rows.iter().enumerate() {
                if u >= d {
                    return Err(Error::InvalidUniverse(format!(
                        "object {i} row {a} maps to {u}, outside universe of size {d}"
                    )));
                }
                if std::mem::replace(&mut seen[u], true) {
                    return Err(Error::InvalidUniverse(format!(
                        "object {i} maps two rows to universe point {u}"
                    )));
                }
            }
        }
        Ok(Self { d, assignments })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.assignments.len()
    }

    pub fn assignments(&self) -> &[Vec<usize>] {
        &self.assignments
    }

    pub fn assignment(&self, i: usize) -> &[usize] {
        &self.assignments[i]
    }

    /// Correspondences of `P_i P_jᵀ`: rows of `i` and `j` sharing a label,
    /// sorted by row of `i`.
    pub fn derive_pairwise(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let mut owner = vec![usize::MAX; self.d];
        for (b, &u) in self.assignments[j].iter().enumerate() {
            owner[u] = b;
        }
        self.assignments[i]
            .iter()
            .enumerate()
            .filter_map(|(a, &u)| (owner[u] != usize::MAX).then_some((a, owner[u])))
            .collect()
    }

    /// All derived blocks `P_i P_jᵀ` for `i < j`.
    pub fn to_match_set(&self) -> PairwiseMatchSet {
        let mut set = PairwiseMatchSet::new(PairwiseSource::block_sizes(self))
            .expect("universe objects are non-empty");
        for i in 0..self.k() {
            for j in (i + 1)..self.k() {
                set.insert(i, j, self.derive_pairwise(i, j))
                    .expect("derived blocks are partial permutations");
            }
        }
        set
    }

    /// Applies the same label permutation `u ↦ perm[u]` to every object.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.d {
            return Err(Error::InvalidUniverse(format!(
                "relabelling has {} entries, universe has {}",
                perm.len(),
                self.d
            )));
        }
        let assignments = self
            .assignments
            .iter()
            .map(|rows| rows.iter().map(|&u| perm[u]).collect())
            .collect();
        Self::new(self.d, assignments)
    }
}

impl PairwiseSource for UniverseMatching {
    fn block_sizes(&self) -> Vec<usize> {
        self.assignments.iter().map(Vec::len).collect()
    }

    fn pair(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        self.derive_pairwise(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_collisions_and_out_of_range() {
        assert!(UniverseMatching::new(3, vec![vec![0, 0]]).is_err());
        assert!(UniverseMatching::new(3, vec![vec![3]]).is_err());
        assert!(
            serde_json::from_str::<UniverseMatching>(r#"{"d":2,"assignments":[[1,1]]}"#).is_err()
        );
    }

    #[test]
    fn equal_assignments_give_identity() {
        let u = UniverseMatching::new(4, vec![vec![2, 0, 3], vec![2, 0, 3]]).unwrap();
        assert_eq!(u.derive_pairwise(0, 1), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn disjoint_labels_give_empty_match() {
        let u = UniverseMatching::new(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(u.derive_pairwise(0, 1).is_empty());
    }

    #[test]
    fn partial_overlap() {
        let u = UniverseMatching::new(5, vec![vec![4, 1, 0], vec![0, 2, 4]]).unwrap();
        assert_eq!(u.derive_pairwise(0, 1), vec![(0, 2), (2, 0)]);
        assert_eq!(u.derive_pairwise(1, 0), vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn serde_round_trip() {
        let u = UniverseMatching::new(3, vec![vec![2, 0], vec![1]]).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"d":3,"assignments":[[2,0],[1]]}"#);
        assert_eq!(serde_json::from_str::<UniverseMatching>(&s).unwrap(), u);
    }
}
