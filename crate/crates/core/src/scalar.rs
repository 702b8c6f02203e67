use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating-point scalar the numerical core is generic over.
///
/// Implemented for `f32` and `f64`. Everything the propagator needs
/// (FFT support, constants, conversions) is bundled here so generic code
/// only ever names one bound.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + FftNum
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into this type.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }

    /// Machine epsilon as `f64`, used to scale tolerances.
    fn epsilon_f64() -> f64 {
        Self::epsilon().as_f64()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

/// Converts a complex value between scalar types.
#[inline]
pub fn cast_complex<A: Real, B: Real>(z: C<A>) -> C<B> {
    C::new(B::lit(z.re.as_f64()), B::lit(z.im.as_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half<T: Real>() -> T {
        T::lit(0.5)
    }

    #[test]
    fn literals_convert_for_both_widths() {
        assert_eq!(half::<f32>(), 0.5f32);
        assert_eq!(half::<f64>(), 0.5f64);
        assert_eq!(f32::from_count(7), 7.0);
        let z: C<f32> = cast_complex(C::new(1.5f64, -2.0));
        assert_eq!(z, C::new(1.5f32, -2.0));
    }
}
