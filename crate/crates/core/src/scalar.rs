use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Real scalar the solvers are generic over.
///
/// Tolerances that depend on the working precision live here so the
/// numerical kernels can stay written once for `f32` and `f64`.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Bound on `‖UᵀU − I‖_F` accepted for a Stiefel point.
    fn ortho_tol() -> Self;

    /// Relative threshold used for rank decisions and Jacobi sweeps.
    fn rel_tol() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    #[inline]
    fn ortho_tol() -> Self {
        1e-8
    }
    #[inline]
    fn rel_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    #[inline]
    fn ortho_tol() -> Self {
        1e-4
    }
    #[inline]
    fn rel_tol() -> Self {
        1e-6
    }
}
