//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All algebra is written against [`Real`], implemented for `f32` and `f64`.
//! Complex amplitudes are `Complex<T>`; the crate root exposes `f64` aliases.

use std::fmt;

use nalgebra::{Complex, RealField};
use num_traits::ToPrimitive;

/// Real floating-point scalar usable by the solvers (`f32` or `f64`).
pub trait Real: RealField + Copy + ToPrimitive + fmt::LowerExp + 'static {
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting and output.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over [`Real`].
pub type C<T> = Complex<T>;

/// Builds a complex number from real and imaginary parts.
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// Lifts a real number to the complex line.
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
pub fn i_unit<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{iφ}`.
pub fn expi<T: Real>(phi: T) -> C<T> {
    Complex::new(phi.cos(), phi.sin())
}

/// Modulus of a complex number.
pub fn cabs<T: Real>(z: C<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Squared modulus of a complex number.
pub fn cabs2<T: Real>(z: C<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// Argument of a complex number in (−π, π].
pub fn carg<T: Real>(z: C<T>) -> T {
    z.im.atan2(z.re)
}

/// Largest modulus over the entries of a complex matrix or vector.
pub fn max_abs<'a, T: Real, I: IntoIterator<Item = &'a C<T>>>(entries: I) -> T {
    entries.into_iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
}
