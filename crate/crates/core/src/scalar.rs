//! Scalar abstraction used by every geometric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating point coordinate type: `f32` or `f64`.
///
/// Conversion to `f64` must be exact so that the orientation predicates used
/// by the layout checker see the very same numbers the layout stores.
pub trait Scalar:
    Float + FromPrimitive + Into<f64> + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative per-edge tolerance for the isometry check of placed triangles.
    fn isometry_tolerance() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to any float scalar")
    }

    fn to_f64_exact(self) -> f64 {
        self.into()
    }

    /// The neighbouring float of `self` in the direction of `toward`.
    fn next_toward(self, toward: Self) -> Self;
}

macro_rules! next_toward {
    ($x:ident, $toward:ident, $t:ty) => {{
        if $x.is_nan() || $toward.is_nan() {
            <$t>::NAN
        } else if $x == $toward {
            $toward
        } else if $x == 0.0 {
            <$t>::from_bits(1).copysign($toward)
        } else if ($toward > $x) == ($x > 0.0) {
            <$t>::from_bits($x.to_bits() + 1)
        } else {
            <$t>::from_bits($x.to_bits() - 1)
        }
    }};
}

impl Scalar for f64 {
    fn isometry_tolerance() -> Self {
        1e-9
    }

    fn next_toward(self, toward: Self) -> Self {
        next_toward!(self, toward, f64)
    }
}

impl Scalar for f32 {
    // f32 round-off after a rotation is already ~1e-7 relative; layouts
    // spanning many strips lose a few more digits to the growing x offset.
    fn isometry_tolerance() -> Self {
        1e-4
    }

    fn next_toward(self, toward: Self) -> Self {
        next_toward!(self, toward, f32)
    }
}

/// Shorthand for a literal constant in the scalar type.
#[inline]
pub(crate) fn lit<S: Scalar>(v: f64) -> S {
    S::from_f64_lossy(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn next_toward_steps_one_float() {
        assert_eq!(1.0f64.next_toward(2.0), 1.0 + f64::EPSILON);
        assert_eq!(1.0f32.next_toward(0.0), 1.0 - f32::EPSILON / 2.0);
        assert_eq!((-1.0f64).next_toward(0.0), -1.0 + f64::EPSILON / 2.0);
        assert!(0.0f64.next_toward(-1.0) < 0.0);
        assert_eq!(3.0f32.next_toward(3.0), 3.0);
    }
}
