//! Scalar abstraction shared by the numerical kernels.

use nalgebra as na;
use num_traits as nt;

/// Real floating point type usable by the crystal, coupling, dynamics and
/// observable kernels. Implemented for `f32` and `f64`.
pub trait Real:
    Copy
    + Default
    + Send
    + Sync
    + std::fmt::Debug
    + std::fmt::Display
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::ToPrimitive
    + na::RealField
    + na::Scalar
    + 'static
{
    /// Machine epsilon.
    const EPS: Self;

    /// Smallest positive normal value.
    const TINY: Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self;

    /// Converts a count.
    fn from_usize_lossy(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn as_f64(self) -> f64;
}

macro_rules! impl_real {
    ($f:ty) => {
        impl Real for $f {
            const EPS: Self = <$f>::EPSILON;
            const TINY: Self = <$f>::MIN_POSITIVE;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $f
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

pub type C<T> = num_complex::Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    num_complex::Complex::new(re, im)
}

/// Modulus of a complex number.
#[inline]
pub fn cabs<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}
