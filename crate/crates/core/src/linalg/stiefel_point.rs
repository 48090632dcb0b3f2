use std::ops::Deref;

use crate::error::{shape_err, Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// An `m×d` matrix with orthonormal columns, `d ≤ m`.
#[derive(Clone, Debug, PartialEq)]
pub struct StiefelPoint<T> {
    inner: DenseMatrix<T>,
}

impl<T: Scalar> StiefelPoint<T> {
    /// Wraps `u` after checking `‖UᵀU − I‖_F ≤ T::ortho_tol()`.
    pub fn new(u: DenseMatrix<T>) -> Result<Self> {
        if u.cols() == 0 || u.cols() > u.rows() {
            return Err(shape_err(
                "m x d with 1 <= d <= m",
                format!("{}x{}", u.rows(), u.cols()),
            ));
        }
        if !u.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = orthonormality_error(&u);
        if !(deviation <= T::ortho_tol()) {
            return Err(Error::NotOrthonormal {
                deviation: deviation.to_f64_lossy(),
            });
        }
        Ok(Self { inner: u })
    }

    pub(crate) fn new_unchecked(u: DenseMatrix<T>) -> Self {
        debug_assert!(u.cols() <= u.rows());
        Self { inner: u }
    }

    /// The first `d` columns of the identity, `[e_1 … e_d]`.
    pub fn canonical(m: usize, d: usize) -> Result<Self> {
        Self::new(DenseMatrix::from_fn(m, d, |i, j| {
            if i == j {
                T::one()
            } else {
                T::zero()
            }
        }))
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.inner.cols()
    }

    pub fn as_matrix(&self) -> &DenseMatrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.inner
    }

    pub fn orthonormality_error(&self) -> T {
        orthonormality_error(&self.inner)
    }

    /// Right-multiplies by a `d×d` orthogonal matrix; the column span is unchanged.
    pub fn rotate(&self, q: &DenseMatrix<T>) -> Result<Self> {
        if q.shape() != (self.d(), self.d()) {
            return Err(shape_err(
                format!("{0}x{0}", self.d()),
                format!("{}x{}", q.rows(), q.cols()),
            ));
        }
        Self::new(self.inner.matmul(q)?)
    }
}

impl<T> Deref for StiefelPoint<T> {
    type Target = DenseMatrix<T>;

    fn deref(&self) -> &DenseMatrix<T> {
        &self.inner
    }
}

fn orthonormality_error<T: Scalar>(u: &DenseMatrix<T>) -> T {
    let gram = u.t_matmul(u).expect("gram of a single matrix");
    gram.sub(&DenseMatrix::identity(u.cols()))
        .expect("same shape")
        .frobenius_norm()
}

/// `‖VVᵀU − U‖_F`: zero exactly when `im(U) ⊆ im(V)`.
pub fn subspace_distance<T: Scalar>(u: &StiefelPoint<T>, v: &StiefelPoint<T>) -> Result<T> {
    if u.shape() != v.shape() {
        return Err(shape_err(
            format!("{}x{}", v.m(), v.d()),
            format!("{}x{}", u.m(), u.d()),
        ));
    }
    let vtu = v.t_matmul(u)?;
    let proj = v.matmul(&vtu)?;
    Ok(proj.sub(u)?.frobenius_norm())
}
