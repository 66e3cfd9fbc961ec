//! Scalar abstraction shared by the numeric modules.

use num_traits::{Float, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point scalar the projection, cost, assembly and solver code is written against.
///
/// Implemented for `f32` and `f64`. Tolerances passed to the solver should match the precision
/// of the chosen type.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable as scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Relative difference `|a - b| / max(|a|, |b|, 1)`.
pub fn rel_diff<T: Scalar>(a: T, b: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(<f64 as Scalar>::lit(0.25), 0.25);
        assert_eq!(<f32 as Scalar>::lit(0.25), 0.25f32);
    }

    #[test]
    fn rel_diff_floors_denominator_at_one() {
        assert_eq!(rel_diff(0.0, 1e-7), 1e-7);
        assert!((rel_diff(100.0, 101.0) - 1.0 / 101.0).abs() < 1e-15);
    }
}
