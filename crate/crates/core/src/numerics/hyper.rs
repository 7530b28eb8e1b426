use num_complex::Complex;
use num_traits::Zero;

use super::{cst, gamma, is_finite, ln, near_integer, series_eps, Real};
use crate::{Error, Result};

const MAX_TERMS: usize = 10_000;
const ASYMPTOTIC_MIN_ABS_Z: f64 = 25.0;

/// Taylor series of `₁F₁(a; b; z)` with its absolute term sum.
fn taylor<T: Real>(a: Complex<T>, b: Complex<T>, z: Complex<T>) -> Result<(Complex<T>, T)> {
    let eps = series_eps::<T>();
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    let mut abs = T::one();
    let zn = z.norm();
    for k in 0..MAX_TERMS {
        let fk = cst::<T>(k as f64);
        let bk = b + fk;
        term = term * (a + fk) / bk * z / (fk + T::one());
        if term.is_zero() {
            return Ok((sum, abs));
        }
        sum = sum + term;
        abs = abs + term.norm();
        let growing = (a + fk).norm() * zn > bk.norm() * (fk + T::one());
        if !growing && term.norm() <= eps * sum.norm() {
            return Ok((sum, abs));
        }
    }
    Err(Error::Convergence(format!("1F1 series at a = {}, b = {}, z = {}", a, b, z)))
}

/// Large-|z| expansion (both exponential contributions retained).
fn asymptotic<T: Real>(a: Complex<T>, b: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    let gb = gamma(b)?;
    let lz = ln(z);
    let sum = |p: Complex<T>, q: Complex<T>, x: Complex<T>| -> Complex<T> {
        // Σ (p)_s (q)_s / s! x^{−s}, truncated before the terms grow
        let mut t = one;
        let mut s = one;
        let mut last = T::infinity();
        for k in 0..200 {
            let fk = cst::<T>(k as f64);
            let next = t * (p + fk) * (q + fk) / (x * (fk + T::one()));
            if next.norm() >= last || next.is_zero() {
                break;
            }
            last = next.norm();
            t = next;
            s = s + t;
        }
        s
    };
    let mut out: Complex<T> = Complex::zero();
    if near_integer(a, T::epsilon() * cst(16.0)).filter(|&k| k <= 0).is_none() {
        let ga = gamma(a)?;
        out = out + (z + (a - b) * lz).exp() / ga * sum(one - a, b - a, z);
    }
    let bma = b - a;
    if near_integer(bma, T::epsilon() * cst(16.0)).filter(|&k| k <= 0).is_none() {
        let gba = gamma(bma)?;
        let sign = if z.im >= T::zero() { T::one() } else { -T::one() };
        let phase = (Complex::new(T::zero(), sign * T::PI()) * a).exp();
        out = out + phase * (-a * lz).exp() / gba * sum(a, a - b + one, -z);
    }
    Ok(out * gb)
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; z) = M(a, b, z)`.
///
/// Taylor series on `Re z ≥ 0`, Kummer's transformation
/// `M(a, b, z) = e^z M(b−a, b, −z)` on `Re z < 0`, and the large-argument
/// expansion when the series cancels badly.
pub fn kummer_1f1<T: Real>(a: Complex<T>, b: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    if near_integer(b, T::epsilon() * cst(16.0)).filter(|&k| k <= 0).is_some() {
        return Err(Error::Pole(format!("1F1 with b = {}", b)));
    }
    if z.is_zero() {
        return Ok(Complex::new(T::one(), T::zero()));
    }
    let a_terminates = near_integer(a, T::zero()).filter(|&k| k <= 0).is_some();
    let (val, abs, factor) = if z.re < T::zero() && !a_terminates {
        let (s, ab) = taylor(b - a, b, -z)?;
        (s, ab, z.exp())
    } else {
        let (s, ab) = taylor(a, b, z)?;
        (s, ab, Complex::new(T::one(), T::zero()))
    };
    let kappa = abs / val.norm();
    if kappa > cst(1e6) && z.norm() > cst(ASYMPTOTIC_MIN_ABS_Z) {
        if let Ok(v) = asymptotic(a, b, z) {
            if is_finite(v) {
                return Ok(v);
            }
        }
    }
    let v = val * factor;
    if is_finite(v) {
        Ok(v)
    } else {
        Err(Error::Evaluation(format!("1F1({}; {}; {}) not finite", a, b, z)))
    }
}
