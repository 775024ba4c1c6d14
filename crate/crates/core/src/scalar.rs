//! Scalar abstraction.
//!
//! Everything in this crate is generic over the real field backing the
//! complex matrix entries. The [`Real`] trait collects what the algorithms
//! actually need; `f32` and `f64` are the supported instantiations, with
//! concrete `f64` aliases exported from the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type backing all matrix entries.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into `T`.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 must convert to the scalar type")
}

/// A tolerance constant, floored at `32 * epsilon` of the target scalar.
///
/// The defaults throughout the crate are calibrated for `f64`; the floor
/// keeps them above working precision when instantiated at `f32`.
#[inline]
pub fn tol<T: Real>(base: f64) -> T {
    let floor = T::epsilon() * real::<T>(32.0);
    Float::max(real::<T>(base), floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_tolerances_pass_through_unchanged() {
        assert_eq!(tol::<f64>(1e-12), 1e-12);
        assert_eq!(tol::<f64>(1e-10), 1e-10);
    }

    #[test]
    fn f32_tolerances_are_floored_at_working_precision() {
        let t = tol::<f32>(1e-12);
        assert_eq!(t, 32.0 * f32::EPSILON);
        assert!(t > 0.0);
    }
}
