//! Complex special functions and polynomial arithmetic.

mod gamma;
mod hyper;
mod poly;
mod quad;
mod rational;
mod roots;

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub use gamma::{
    exp_integral_e1, gamma, ln_gamma, lower_gamma_scaled, lower_incomplete_gamma, pochhammer,
    upper_incomplete_gamma, upper_incomplete_gamma_cf, upper_incomplete_gamma_routed, upper_incomplete_gamma_series,
    IncGammaRoute,
    R_SWITCH,
};
pub use hyper::kummer_1f1;
pub use poly::Polynomial;
pub use quad::{integrate_segment, QuadOptions};
pub use rational::RationalFunction;
pub use roots::{cluster_roots, polynomial_roots};

/// Real scalar type the library is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Real constant converted to `T`.
#[inline]
pub fn cst<T: Real>(x: f64) -> T {
    T::from_f64(x).unwrap()
}

/// Real number as a complex value.
#[inline]
pub fn cx<T: Real>(x: f64) -> Complex<T> {
    Complex::new(cst(x), T::zero())
}

/// Relative stopping threshold for series: `1e-16` in double precision,
/// half an ulp otherwise.
#[inline]
pub fn series_eps<T: Real>() -> T {
    cst::<T>(1e-16).max(T::epsilon() * cst(0.5))
}

/// `tol`, but never below a few ulps of `T`.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    cst::<T>(x).max(T::epsilon() * cst(8.0))
}

/// True if both parts are finite.
#[inline]
pub fn is_finite<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal logarithm with the upper-half-plane limit on the negative real axis.
#[inline]
pub fn ln<T: Real>(z: Complex<T>) -> Complex<T> {
    let z = if z.im == T::zero() { Complex::new(z.re, T::zero()) } else { z };
    z.ln()
}

/// Principal power `z^a` (upper-half-plane limit on the cut); `0^a = 0` for `Re a > 0`.
pub fn powc<T: Real>(z: Complex<T>, a: Complex<T>) -> Complex<T> {
    if z.re == T::zero() && z.im == T::zero() {
        if a.re == T::zero() && a.im == T::zero() {
            return Complex::new(T::one(), T::zero());
        }
        if a.re > T::zero() {
            return Complex::new(T::zero(), T::zero());
        }
        return Complex::new(T::infinity(), T::zero());
    }
    (a * ln(z)).exp()
}

/// Integer power by repeated squaring.
pub fn powi<T: Real>(z: Complex<T>, n: i32) -> Complex<T> {
    z.powi(n)
}

/// Nearest integer to `x` if within `eps`, else `None`.
pub fn near_integer<T: Real>(x: Complex<T>, eps: T) -> Option<i64> {
    let r = x.re.round();
    if (x.re - r).abs() <= eps && x.im.abs() <= eps {
        r.to_i64()
    } else {
        None
    }
}
