//! Real scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point field the matrix kernels are generic over (`f32` or `f64`).
///
/// Besides the arithmetic bounds, each implementation carries the default
/// tolerances used by structural checks, since an absolute `1e-10` is
/// meaningless in single precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for factorization invariants (`1e-12` in f64).
    fn factorization_tol() -> Self;
    /// Relative tolerance for structural preconditions such as skew-Hermitian
    /// input or orthonormal columns (`1e-10` in f64).
    fn structure_tol() -> Self;
    /// Default relative step tolerance for fixed-point iterations.
    fn iteration_tol() -> Self;

    /// Converts an `f64` literal; every `Real` can represent one approximately.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn factorization_tol() -> Self {
        1e-12
    }
    fn structure_tol() -> Self {
        1e-10
    }
    fn iteration_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn factorization_tol() -> Self {
        2e-5
    }
    fn structure_tol() -> Self {
        2e-4
    }
    fn iteration_tol() -> Self {
        1e-6
    }
}
