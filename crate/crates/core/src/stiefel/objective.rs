use crate::error::{shape_err, Result};
use crate::linalg::{DenseMatrix, ProblemMatrix, StiefelPoint};
use crate::scalar::Scalar;
use crate::stiefel::config::StepNorm;

/// Primary objective `f(U) = tr(UᵀWU)`.
pub fn objective_f<T: Scalar>(w: &ProblemMatrix<T>, u: &StiefelPoint<T>) -> Result<T> {
    if w.m() != u.m() {
        return Err(shape_err(
            format!("{} rows", w.m()),
            format!("{}x{}", u.m(), u.d()),
        ));
    }
    let wu = w.entries().matmul(u)?;
    u.dot(&wu)
}

/// Secondary objective `g(U) = Σ_ij U_ij^p`. Requires `p ≥ 2`.
pub fn objective_g<T: Scalar>(u: &DenseMatrix<T>, p: u32) -> T {
    assert!(p >= 2, "sparsity exponent must be at least 2");
    u.as_slice().iter().map(|&x| x.powi(p as i32)).sum()
}

/// `h(U) = Uᵀ (U.^(p−1))`, whose trace is `g(U)`.
pub fn h_matrix<T: Scalar>(u: &DenseMatrix<T>, p: u32) -> DenseMatrix<T> {
    assert!(p >= 2, "sparsity exponent must be at least 2");
    let powered = u.map(|x| x.powi(p as i32 - 1));
    u.t_matmul(&powered).expect("same row count")
}

/// Skew-symmetric part `h − hᵀ`; `p` times this is the Riemannian gradient
/// of `Q ↦ g(UQ)` at `Q = I`.
pub fn skew_gradient<T: Scalar>(u: &DenseMatrix<T>, p: u32) -> DenseMatrix<T> {
    let h = h_matrix(u, p);
    let d = h.rows();
    DenseMatrix::from_fn(d, d, |i, j| h[(i, j)] - h[(j, i)])
}

/// `1 / ‖S‖_∞` for `S = h − hᵀ` under the default [`StepNorm`], or 1 when
/// `S` vanishes.
pub fn step_size<T: Scalar>(u: &DenseMatrix<T>, p: u32) -> T {
    step_size_with(u, p, StepNorm::default())
}

pub fn step_size_with<T: Scalar>(u: &DenseMatrix<T>, p: u32, norm: StepNorm) -> T {
    step_size_for(&skew_gradient(u, p), norm)
}

pub(crate) fn skew_norm<T: Scalar>(skew: &DenseMatrix<T>, norm: StepNorm) -> T {
    match norm {
        StepNorm::MaxEntry => skew.max_abs(),
        StepNorm::MaxRowSum => (0..skew.rows())
            .map(|i| skew.row(i).iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max),
    }
}

/// A skew gradient at rounding level counts as zero; otherwise the
/// scale-free step `1/‖S‖` would turn noise into an O(1) rotation.
pub(crate) fn is_stationary<T: Scalar>(skew: &DenseMatrix<T>) -> bool {
    skew.max_abs() <= T::rel_tol()
}

pub(crate) fn step_size_for<T: Scalar>(skew: &DenseMatrix<T>, norm: StepNorm) -> T {
    if is_stationary(skew) {
        T::one()
    } else {
        T::one() / skew_norm(skew, norm)
    }
}

/// `Z = I + α(h − hᵀ)`. Identity plus a skew matrix, hence `σ_min(Z) ≥ 1`.
pub fn build_z<T: Scalar>(u: &DenseMatrix<T>, p: u32, alpha: T) -> DenseMatrix<T> {
    z_from_skew(&skew_gradient(u, p), alpha)
}

pub(crate) fn z_from_skew<T: Scalar>(skew: &DenseMatrix<T>, alpha: T) -> DenseMatrix<T> {
    let d = skew.rows();
    DenseMatrix::from_fn(d, d, |i, j| {
        let id = if i == j { T::one() } else { T::zero() };
        id + alpha * skew[(i, j)]
    })
}
