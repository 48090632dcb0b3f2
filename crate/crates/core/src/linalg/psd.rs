use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// Symmetric positive semidefinite matrix `W` of the quadratic program
/// `max tr(UᵀWU)` over the Stiefel manifold.
///
/// Optionally records the block structure when `W` was assembled from
/// pairwise matches between objects.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemMatrix<T> {
    entries: DenseMatrix<T>,
    block_sizes: Option<Vec<usize>>,
    shift: T,
}

impl<T: Scalar> ProblemMatrix<T> {
    /// Accepts an already symmetric matrix as is, without a diagonal shift.
    ///
    /// The caller vouches for positive semidefiniteness; use
    /// [`symmetrize_psd`] to certify it instead.
    pub fn from_symmetric(entries: DenseMatrix<T>) -> Result<Self> {
        if !entries.is_finite() {
            return Err(Error::NonFinite);
        }
        let asym = entries.asymmetry()?;
        let tol = T::lit(1e-10) * entries.max_abs().max(T::one());
        if asym > tol {
            return Err(Error::NotSymmetric {
                asymmetry: asym.to_f64_lossy(),
            });
        }
        Ok(Self {
            entries,
            block_sizes: None,
            shift: T::zero(),
        })
    }

    pub fn with_block_sizes(mut self, sizes: Vec<usize>) -> Result<Self> {
        let total: usize = sizes.iter().sum();
        if total != self.m() || sizes.iter().any(|&s| s == 0) {
            return Err(shape_err(
                format!("positive block sizes summing to {}", self.m()),
                format!("{sizes:?}"),
            ));
        }
        self.block_sizes = Some(sizes);
        Ok(self)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &DenseMatrix<T> {
        &self.entries
    }

    pub fn block_sizes(&self) -> Option<&[usize]> {
        self.block_sizes.as_deref()
    }

    /// Diagonal shift `δ` added by [`symmetrize_psd`]; it contributes the
    /// constant `δ·d` to every objective value.
    pub fn shift(&self) -> T {
        self.shift
    }

    /// Smallest Gershgorin lower eigenvalue bound `min_i (w_ii − Σ_{j≠i} |w_ij|)`.
    pub fn gershgorin_lower_bound(&self) -> T {
        gershgorin_lower_bound(&self.entries)
    }
}

fn gershgorin_lower_bound<T: Scalar>(w: &DenseMatrix<T>) -> T {
    (0..w.rows())
        .map(|i| {
            let off: T = w
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, x)| x.abs())
                .sum();
            w[(i, i)] - off
        })
        .fold(T::infinity(), T::min)
}

/// Replaces `W` by `(W + Wᵀ)/2 + δI` with `δ = max(0, −g)`, where `g` is the
/// Gershgorin lower eigenvalue bound of the symmetric part.
///
/// The skew part contributes nothing to `tr(UᵀWU)` and the shift adds the
/// constant `δ·d`, so maximisers over the Stiefel manifold are unchanged.
pub fn symmetrize_psd<T: Scalar>(w: &DenseMatrix<T>) -> Result<ProblemMatrix<T>> {
    if !w.is_square() {
        return Err(Error::NotSquare {
            rows: w.rows(),
            cols: w.cols(),
        });
    }
    if !w.is_finite() {
        return Err(Error::NonFinite);
    }
    let half = T::lit(0.5);
    let n = w.rows();
    let mut sym = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            w[(i, i)]
        } else {
            (w[(i, j)] + w[(j, i)]) * half
        }
    });

    // Rounding in `w_ii + δ` can leave a bound a few ulps below zero, so the
    // shift is topped up until every row is certified.
    let mut shift = T::zero();
    for _ in 0..8 {
        let g = gershgorin_lower_bound(&sym);
        if g >= T::zero() {
            break;
        }
        let step = -g;
        for i in 0..n {
            sym[(i, i)] += step;
        }
        shift += step;
    }
    if gershgorin_lower_bound(&sym) < T::zero() {
        let bump = T::epsilon() * sym.max_abs() * T::lit(n as f64);
        for i in 0..n {
            sym[(i, i)] += bump;
        }
        shift += bump;
    }

    Ok(ProblemMatrix {
        entries: sym,
        block_sizes: None,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_part_vanishes() {
        let w = DenseMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap();
        let p = symmetrize_psd(&w).unwrap();
        assert_eq!(p.entries(), &DenseMatrix::zeros(2, 2));
        assert_eq!(p.shift(), 0.0);
    }

    #[test]
    fn indefinite_matrix_is_shifted_by_gershgorin_bound() {
        let w = DenseMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let p = symmetrize_psd(&w).unwrap();
        assert_eq!(p.shift(), 1.0);
        assert_eq!(
            p.entries(),
            &DenseMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap()
        );
    }

    #[test]
    fn idempotent_and_certified() {
        let w = DenseMatrix::from_rows(&[[0.3, -2.0, 0.7], [1.1, -0.4, 0.2], [0.05, 3.0, 0.0]])
            .unwrap();
        let p = symmetrize_psd(&w).unwrap();
        assert!(p.gershgorin_lower_bound() >= 0.0);
        assert_eq!(p.entries().asymmetry().unwrap(), 0.0);
        let again = symmetrize_psd(p.entries()).unwrap();
        assert_eq!(again.entries(), p.entries());
        assert_eq!(again.shift(), 0.0);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(symmetrize_psd(&DenseMatrix::<f64>::zeros(2, 3)).is_err());
        assert!(ProblemMatrix::from_symmetric(
            DenseMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn block_sizes_must_sum_to_m() {
        let p = ProblemMatrix::from_symmetric(DenseMatrix::<f64>::identity(4)).unwrap();
        assert!(p.clone().with_block_sizes(vec![1, 2]).is_err());
        assert!(p.clone().with_block_sizes(vec![4, 0]).is_err());
        let p = p.with_block_sizes(vec![1, 3]).unwrap();
        assert_eq!(p.block_sizes(), Some(&[1, 3][..]));
    }
}
