//! Rectangular linear assignment: maximise `Σ_i C[i, σ(i)]` over injections
//! `σ` from rows into columns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assignment<T> {
    /// Column assigned to each row; all distinct.
    pub row_to_col: Vec<usize>,
    pub score: T,
}

fn score_of<T: Scalar>(c: &DenseMatrix<T>, row_to_col: &[usize]) -> T {
    row_to_col
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (i, &j)| acc + c[(i, j)])
}

/// Shortest-augmenting-path (Hungarian / Jonker-Volgenant) solver for an
/// `m×d` profit matrix with `m ≤ d`. Every row gets a distinct column.
///
/// Profits are turned into nonnegative costs `max(C) − C`. Ties are broken
/// towards the lowest column index in scan order, so results are
/// reproducible.
pub fn solve_max_assignment<T: Scalar>(c: &DenseMatrix<T>) -> Result<Assignment<T>> {
    let (n, m) = c.shape();
    if n > m {
        return Err(Error::MoreRowsThanCols { rows: n, cols: m });
    }
    if !c.is_finite() {
        return Err(Error::NonFinite);
    }
    if n == 0 {
        return Ok(Assignment {
            row_to_col: Vec::new(),
            score: T::zero(),
        });
    }
    let top = c
        .as_slice()
        .iter()
        .fold(T::neg_infinity(), |a, &x| a.max(x));
    let cost = |i: usize, j: usize| top - c[(i - 1, j - 1)];

    // 1-based potentials; column 0 is the virtual root of each search tree.
    let inf = T::infinity();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![usize::MAX; n];
    for j in 1..=m {
        if owner[j] > 0 {
            row_to_col[owner[j] - 1] = j - 1;
        }
    }
    debug_assert!(row_to_col.iter().all(|&j| j < m));
    let score = score_of(c, &row_to_col);
    Ok(Assignment { row_to_col, score })
}

pub const BRUTE_FORCE_MAX_ROWS: usize = 6;
pub const BRUTE_FORCE_MAX_COLS: usize = 7;

/// Exhaustive search over all `d!/(d−m)!` injections. Reference for tests;
/// limited to `m ≤ 6`, `d ≤ 7`.
pub fn brute_force_assignment<T: Scalar>(c: &DenseMatrix<T>) -> Result<Assignment<T>> {
    let (n, m) = c.shape();
    if n > BRUTE_FORCE_MAX_ROWS || m > BRUTE_FORCE_MAX_COLS {
        return Err(Error::SizeLimit { rows: n, cols: m });
    }
    if n > m {
        return Err(Error::MoreRowsThanCols { rows: n, cols: m });
    }

    struct Search<'a, T> {
        c: &'a DenseMatrix<T>,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Option<(T, Vec<usize>)>,
    }

    impl<T: Scalar> Search<'_, T> {
        fn run(&mut self, row: usize, acc: T) {
            if row == self.c.rows() {
                if self.best.as_ref().is_none_or(|(b, _)| acc > *b) {
                    self.best = Some((acc, self.current.clone()));
                }
                return;
            }
            for j in 0..self.c.cols() {
                if self.used[j] {
                    continue;
                }
                self.used[j] = true;
                self.current.push(j);
                self.run(row + 1, acc + self.c[(row, j)]);
                self.current.pop();
                self.used[j] = false;
            }
        }
    }

    let mut search = Search {
        c,
        used: vec![false; m],
        current: Vec::with_capacity(n),
        best: None,
    };
    search.run(0, T::zero());
    let (score, row_to_col) = search.best.expect("m <= d admits an injection");
    Ok(Assignment { row_to_col, score })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[f64]]) -> DenseMatrix<f64> {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_profit() {
        let a = solve_max_assignment(&DenseMatrix::<f64>::identity(2)).unwrap();
        assert_eq!(a.row_to_col, vec![0, 1]);
        assert_eq!(a.score, 2.0);
    }

    #[test]
    fn anti_diagonal() {
        let a = solve_max_assignment(&mat(&[&[0.0, 5.0], &[5.0, 0.0]])).unwrap();
        assert_eq!(a.row_to_col, vec![1, 0]);
        assert_eq!(a.score, 10.0);
    }

    #[test]
    fn rectangular_example_matches_enumeration() {
        let c = mat(&[&[1.0, 9.0, 2.0], &[8.0, 1.0, 1.0]]);
        let a = solve_max_assignment(&c).unwrap();
        assert_eq!(a.row_to_col, vec![1, 0]);
        assert_eq!(a.score, 17.0);
        assert_eq!(brute_force_assignment(&c).unwrap(), a);
    }

    #[test]
    fn negative_profits() {
        let c = mat(&[&[-3.0, -1.0, -2.0], &[-1.0, -5.0, -4.0]]);
        let a = solve_max_assignment(&c).unwrap();
        assert_eq!(a.row_to_col, vec![1, 0]);
        assert_eq!(a.score, -2.0);
    }

    #[test]
    fn brute_force_examples() {
        let a = brute_force_assignment(&DenseMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(a.row_to_col, vec![0, 1, 2]);
        assert_eq!(a.score, 3.0);
        let z = DenseMatrix::<f64>::zeros(2, 3);
        assert_eq!(
            brute_force_assignment(&z).unwrap().score,
            solve_max_assignment(&z).unwrap().score
        );
    }

    #[test]
    fn errors() {
        assert_eq!(
            solve_max_assignment(&DenseMatrix::<f64>::zeros(3, 2)),
            Err(Error::MoreRowsThanCols { rows: 3, cols: 2 })
        );
        assert_eq!(
            brute_force_assignment(&DenseMatrix::<f64>::zeros(7, 7)),
            Err(Error::SizeLimit { rows: 7, cols: 7 })
        );
        assert_eq!(
            brute_force_assignment(&DenseMatrix::<f64>::zeros(2, 8)),
            Err(Error::SizeLimit { rows: 2, cols: 8 })
        );
    }

    #[test]
    fn empty_rows() {
        let a = solve_max_assignment(&DenseMatrix::<f64>::zeros(0, 3)).unwrap();
        assert!(a.row_to_col.is_empty());
    }

    fn profit_matrix() -> impl Strategy<Value = DenseMatrix<f64>> {
        (1usize..=6, 0usize..=3).prop_flat_map(|(m, extra)| {
            let d = (m + extra).min(7);
            prop::collection::vec(-10.0f64..10.0, m * d)
                .prop_map(move |v| DenseMatrix::from_vec(m, d, v).unwrap())
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(c in profit_matrix()) {
            let fast = solve_max_assignment(&c).unwrap();
            let slow = brute_force_assignment(&c).unwrap();
            prop_assert_eq!(fast.score, slow.score);
        }

        #[test]
        fn output_is_injective(c in profit_matrix()) {
            let a = solve_max_assignment(&c).unwrap();
            prop_assert_eq!(a.row_to_col.len(), c.rows());
            let mut seen = vec![false; c.cols()];
            for &j in &a.row_to_col {
                prop_assert!(j < c.cols());
                prop_assert!(!seen[j]);
                seen[j] = true;
            }
        }

        #[test]
        fn row_shift_keeps_argmax(c in profit_matrix(), row in 0usize..6, shift in -50.0f64..50.0) {
            let row = row % c.rows();
            let mut shifted = c.clone();
            for x in shifted.row_mut(row) {
                *x += shift;
            }
            let a = brute_force_assignment(&c).unwrap();
            let b = solve_max_assignment(&shifted).unwrap();
            // Only compare when the optimum is not a near tie.
            let gap = second_best_gap(&c);
            prop_assume!(gap > 1e-9);
            prop_assert_eq!(a.row_to_col, b.row_to_col);
        }
    }

    fn second_best_gap(c: &DenseMatrix<f64>) -> f64 {
        fn walk(
            c: &DenseMatrix<f64>,
            row: usize,
            used: &mut Vec<bool>,
            acc: f64,
            out: &mut Vec<f64>,
        ) {
            if row == c.rows() {
                out.push(acc);
                return;
            }
            for j in 0..c.cols() {
                if !used[j] {
                    used[j] = true;
                    walk(c, row + 1, used, acc + c[(row, j)], out);
                    used[j] = false;
                }
            }
        }
        let mut all = Vec::new();
        walk(c, 0, &mut vec![false; c.cols()], 0.0, &mut all);
        all.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if all.len() < 2 {
            f64::INFINITY
        } else {
            all[0] - all[1]
        }
    }
}
