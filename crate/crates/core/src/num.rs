//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All state, operators and solvers are generic over a real floating type `T`
//! and work with `Complex<T>` entries. Tolerances depend on the precision of
//! `T`, so they live on the trait rather than as free constants.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point scalar usable by the solvers.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Maximum elementwise deviation from Hermiticity accepted for a state.
    const HERMITIAN_TOL: f64;
    /// Maximum deviation of a normalized trace from one.
    const TRACE_TOL: f64;
    /// Lowest eigenvalue accepted as "positive semidefinite".
    const POSITIVITY_TOL: f64;
    /// Relative residual bound for a stationary state.
    const RESIDUAL_TOL: f64;
    /// Allowed drift of the trace during explicit time integration.
    const TRACE_DRIFT_TOL: f64;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-12;
    const TRACE_TOL: f64 = 1e-10;
    const POSITIVITY_TOL: f64 = 1e-9;
    const RESIDUAL_TOL: f64 = 1e-10;
    const TRACE_DRIFT_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-5;
    const TRACE_TOL: f64 = 1e-4;
    const POSITIVITY_TOL: f64 = 1e-4;
    const RESIDUAL_TOL: f64 = 1e-4;
    const TRACE_DRIFT_TOL: f64 = 1e-3;
}

/// Complex scalar built on a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub(crate) fn i_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}
