use crate::error::{shape_err, Error, Result};
use crate::linalg::{DenseMatrix, StiefelPoint};
use crate::scalar::Scalar;

/// Thin QR factorisation `A = QR` normalised so that `R` has a strictly
/// positive diagonal, which makes both factors unique for full-column-rank
/// input.
///
/// Householder reflections produce the factors; any column of `Q` whose
/// diagonal entry in `R` came out negative is flipped together with the
/// matching row of `R`.
///
/// Fails with [`Error::RankDeficient`] when some `|R_ii|` falls below
/// `T::rel_tol() · max|A|`.
pub fn thin_qr_unique<T: Scalar>(a: &DenseMatrix<T>) -> Result<(StiefelPoint<T>, DenseMatrix<T>)> {
    let (m, n) = a.shape();
    if n == 0 || m < n {
        return Err(shape_err("m x n with 1 <= n <= m", format!("{m}x{n}")));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let tol = T::rel_tol() * a.max_abs();

    let mut work = a.clone();
    let mut reflectors: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);

    for k in 0..n {
        let norm = (k..m)
            .map(|i| work[(i, k)] * work[(i, k)])
            .sum::<T>()
            .sqrt();
        let x0 = work[(k, k)];
        let alpha = if x0 >= T::zero() { -norm } else { norm };
        let mut v: Vec<T> = (k..m).map(|i| work[(i, k)]).collect();
        v[0] -= alpha;
        let v_norm2: T = v.iter().map(|&x| x * x).sum();
        if v_norm2 > T::zero() {
            let two = T::lit(2.0);
            for j in k..n {
                let dot: T = v
                    .iter()
                    .enumerate()
                    .map(|(r, &vi)| vi * work[(k + r, j)])
                    .sum();
                let s = two * dot / v_norm2;
                for (r, &vi) in v.iter().enumerate() {
                    work[(k + r, j)] -= s * vi;
                }
            }
        }
        diag.push(alpha);
        reflectors.push(v);
    }

    for (index, &r) in diag.iter().enumerate() {
        if !(r.abs() > tol) {
            return Err(Error::RankDeficient {
                index,
                value: r.abs().to_f64_lossy(),
                tol: tol.to_f64_lossy(),
            });
        }
    }

    let mut r = DenseMatrix::from_fn(n, n, |i, j| if j >= i { work[(i, j)] } else { T::zero() });
    for (i, &d) in diag.iter().enumerate() {
        r[(i, i)] = d;
    }

    // Q = H_0 H_1 ... H_{n-1} [I_n; 0]
    let mut q = DenseMatrix::from_fn(m, n, |i, j| if i == j { T::one() } else { T::zero() });
    let two = T::lit(2.0);
    for k in (0..n).rev() {
        let v = &reflectors[k];
        let v_norm2: T = v.iter().map(|&x| x * x).sum();
        if v_norm2 == T::zero() {
            continue;
        }
        for j in 0..n {
            let dot: T = v
                .iter()
                .enumerate()
                .map(|(r, &vi)| vi * q[(k + r, j)])
                .sum();
            if dot == T::zero() {
                continue;
            }
            let s = two * dot / v_norm2;
            for (r, &vi) in v.iter().enumerate() {
                q[(k + r, j)] -= s * vi;
            }
        }
    }

    for i in 0..n {
        if r[(i, i)] < T::zero() {
            for x in r.row_mut(i) {
                *x = -*x;
            }
            for row in 0..m {
                q[(row, i)] = -q[(row, i)];
            }
        }
    }

    Ok((StiefelPoint::new_unchecked(q), r))
}
