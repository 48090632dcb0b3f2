use crate::sync::{PairwiseMatchSet, PairwiseSource};

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether object-to-universe matchings `{P_i}` with `P_ij = P_i P_jᵀ` exist
/// for every ordered pair.
///
/// Points connected through match edges must share a universe label, so the
/// set is consistent iff every connected cluster holds at most one point per
/// object and every two of its points (in different objects) are matched
/// directly, in both directions. For full permutations this is the triple
/// condition `P_iℓ P_ℓj = P_ij`.
pub fn check_cycle_consistency(matches: &PairwiseMatchSet) -> bool {
    let k = matches.k();
    let offsets = matches.offsets();
    let n = matches.total_points();
    let mut uf = UnionFind::new(n);

    let mut blocks = Vec::with_capacity(k * k.saturating_sub(1));
    for i in 0..k {
        for j in 0..k {
            if i != j {
                let b = matches.pair(i, j);
                for &(a, c) in &b {
                    uf.union(offsets[i] + a, offsets[j] + c);
                }
                blocks.push((i, j, b));
            }
        }
    }

    let mut size = vec![0usize; n];
    let mut object_of_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (obj, (&off, &m)) in offsets.iter().zip(matches.block_sizes()).enumerate() {
        for a in 0..m {
            let r = uf.find(off + a);
            size[r] += 1;
            object_of_root[r].push(obj);
        }
    }
    for objs in &object_of_root {
        if objs.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
    }

    let mut edges = vec![0usize; n];
    for (i, _, b) in &blocks {
        for &(a, _) in b {
            edges[uf.find(offsets[*i] + a)] += 1;
        }
    }
    (0..n).all(|r| size[r] == 0 || edges[r] == size[r] * (size[r] - 1))
}
