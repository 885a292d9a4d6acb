//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the simulator is generic over (`f32` or `f64`).
///
/// The associated tolerances are the thresholds used by validation and
/// consistency checks. They are stated for `f64` and widened for `f32`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Relative Frobenius tolerance for Hermiticity, trace and positivity checks.
    const STRUCTURE_TOL: f64;
    /// Eigenvalues of a density operator below this are treated as kernel.
    const LOG_EPS: f64;
    /// Largest imaginary residue tolerated when a trace must be real.
    const RESIDUE_TOL: f64;
    /// Entropy rates at or below this magnitude leave the local temperature undefined.
    const RATE_EPS: f64;
    /// Relative tolerance of the first-law identity `dU = dW + dQ`.
    const FIRST_LAW_TOL: f64;
    /// Allowed drift of trace/Hermiticity during propagation.
    const DRIFT_TOL: f64;

    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f64 {
    const STRUCTURE_TOL: f64 = 1e-10;
    const LOG_EPS: f64 = 1e-14;
    const RESIDUE_TOL: f64 = 1e-10;
    const RATE_EPS: f64 = 1e-12;
    const FIRST_LAW_TOL: f64 = 1e-9;
    const DRIFT_TOL: f64 = 1e-8;
}

impl Real for f32 {
    const STRUCTURE_TOL: f64 = 1e-4;
    const LOG_EPS: f64 = 1e-6;
    const RESIDUE_TOL: f64 = 1e-4;
    const RATE_EPS: f64 = 1e-5;
    const FIRST_LAW_TOL: f64 = 1e-3;
    const DRIFT_TOL: f64 = 1e-3;
}
