use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, ProblemMatrix, StiefelPoint};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix, eigenvalues in descending order.
#[derive(Clone, Debug)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// Column `i` is the unit eigenvector for `values[i]`.
    pub vectors: StiefelPoint<T>,
}

impl<T: Scalar> SymmetricEigen<T> {
    /// Basis `V_d` of the dominant `d`-dimensional invariant subspace.
    pub fn leading_vectors(&self, d: usize) -> StiefelPoint<T> {
        let v = self.vectors.as_matrix();
        StiefelPoint::new_unchecked(DenseMatrix::from_fn(v.rows(), d, |i, j| v[(i, j)]))
    }

    pub fn leading_sum(&self, d: usize) -> T {
        self.values.iter().take(d).copied().sum()
    }
}

/// Cyclic Jacobi eigen-solver for symmetric matrices.
///
/// Sweeps over all off-diagonal pairs until the off-diagonal Frobenius mass
/// drops below `T::rel_tol() · ‖A‖_F`.
pub fn symmetric_eigen<T: Scalar>(a: &DenseMatrix<T>) -> Result<SymmetricEigen<T>> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = a.asymmetry()?;
    let scale = a.frobenius_norm();
    if asym > T::lit(1e-10) * scale.max(T::one()) {
        return Err(Error::NotSymmetric {
            asymmetry: asym.to_f64_lossy(),
        });
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut v = DenseMatrix::<T>::identity(n);
    let target = T::rel_tol() * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&w) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (T::lit(2.0) * apq);
                let t = {
                    let denom = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta >= T::zero() {
                        T::one() / denom
                    } else {
                        -T::one() / denom
                    }
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rotate(&mut w, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(j, j)].partial_cmp(&w[(i, i)]).unwrap());
    let values = order.iter().map(|&i| w[(i, i)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen {
        values,
        vectors: StiefelPoint::new_unchecked(vectors),
    })
}

/// Reference eigen-decomposition of a problem matrix, used to check the
/// iterative solvers independently.
pub fn eigen_oracle<T: Scalar>(w: &ProblemMatrix<T>) -> Result<SymmetricEigen<T>> {
    symmetric_eigen(w.entries())
}

fn off_diagonal_norm<T: Scalar>(w: &DenseMatrix<T>) -> T {
    let mut acc = T::zero();
    for i in 0..w.rows() {
        for j in 0..w.cols() {
            if i != j {
                acc += w[(i, j)] * w[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Applies `JᵀWJ` for the plane rotation in `(p, q)` and accumulates `V ← VJ`.
fn rotate<T: Scalar>(
    w: &mut DenseMatrix<T>,
    v: &mut DenseMatrix<T>,
    p: usize,
    q: usize,
    c: T,
    s: T,
) {
    let n = w.rows();
    for k in 0..n {
        let wkp = w[(k, p)];
        let wkq = w[(k, q)];
        w[(k, p)] = c * wkp - s * wkq;
        w[(k, q)] = s * wkp + c * wkq;
    }
    for k in 0..n {
        let wpk = w[(p, k)];
        let wqk = w[(q, k)];
        w[(p, k)] = c * wpk - s * wqk;
        w[(q, k)] = s * wpk + c * wqk;
    }
    w[(p, q)] = T::zero();
    w[(q, p)] = T::zero();
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}
