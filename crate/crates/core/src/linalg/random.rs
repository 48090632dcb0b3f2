//! Seeded random matrices.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{thin_qr_unique, DenseMatrix, StiefelPoint};
use crate::scalar::Scalar;

const MAX_REDRAWS: usize = 16;

pub fn gaussian_matrix<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> DenseMatrix<T> {
    DenseMatrix::from_fn(rows, cols, |_, _| {
        T::lit(rng.sample::<f64, _>(StandardNormal))
    })
}

/// Haar-distributed point on `St(m, d)`: the Q factor of a Gaussian matrix.
pub fn random_stiefel<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    d: usize,
) -> Result<StiefelPoint<T>> {
    let mut last_err = None;
    for _ in 0..MAX_REDRAWS {
        match thin_qr_unique(&gaussian_matrix::<T, R>(rng, m, d)) {
            Ok((q, _)) => return Ok(q),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one draw"))
}

pub fn random_orthogonal<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
) -> Result<DenseMatrix<T>> {
    random_stiefel(rng, d, d).map(StiefelPoint::into_matrix)
}
