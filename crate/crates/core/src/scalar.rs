//! Scalar abstraction shared by every module.
//!
//! All numerical code is written against [`Real`], which is implemented for
//! `f32` and `f64`. Tolerances are stated for double precision and scaled up
//! for narrower types through [`Real::tol`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// A tolerance stated for `f64`, widened in proportion to the machine
    /// epsilon of `Self`.
    #[inline]
    fn tol(base: f64) -> Self {
        let scale = Self::epsilon().to_f64().unwrap_or(f64::EPSILON) / f64::EPSILON;
        Self::lit((base * scale).min(1e-2))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_scale_with_precision() {
        assert_eq!(<f64 as Real>::tol(1e-12), 1e-12);
        assert!(<f32 as Real>::tol(1e-12) > 1e-6);
        assert!(<f32 as Real>::tol(1e-9) <= 1e-2);
    }
}
