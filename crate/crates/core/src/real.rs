use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::distr::uniform::SampleUniform;

/// Scalar type the numerical core is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + SampleUniform
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self;

    /// `x.to_f64()` without the `Option`.
    fn as_f64(self) -> f64;

    /// Round half to even.
    fn round_even(self) -> Self;

    /// Normalized sinc, `sin(pi x) / (pi x)`.
    fn sinc(self) -> Self {
        if self.abs() < Self::lit(1e-4) {
            let y = Self::PI() * self;
            let y2 = y * y;
            Self::one() - y2 / Self::lit(6.0) + y2 * y2 / Self::lit(120.0)
        } else {
            let y = Self::PI() * self;
            y.sin() / y
        }
    }

    /// Unit phasor `exp(2 pi i x)`.
    fn cis2pi(self) -> Complex<Self> {
        let frac = self - self.round();
        let (s, c) = (Self::TAU() * frac).sin_cos();
        Complex::new(c, s)
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }
            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
            #[inline]
            fn round_even(self) -> Self {
                self.round_ties_even()
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Shorthand for `S::lit(x)`.
#[inline]
pub fn lit<S: Real>(x: f64) -> S {
    S::lit(x)
}
