//! Independent checks: Runge–Kutta reference integration, power-series residuals
//! of `v` against its operator, and series-versus-integrator comparison.

mod rk;

use num_complex::Complex;
use num_traits::Zero;

use crate::equations::RationalOperator;
use crate::expansion::GammaSeries;
use crate::numerics::{cst, near_integer, Real};
use crate::recurrence::CoefficientSequence;
use crate::{Error, Result};

pub use rk::{integrate_operator, integrate_reference, RkOptions};

/// A point with solution value and derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample<T> {
    pub z: Complex<T>,
    pub u: Complex<T>,
    pub u_prime: Complex<T>,
}

/// Coefficient of one power in the residual expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualTerm<T> {
    /// `t` for the power `(z − z₁)^{t+μ−2}`.
    pub order: usize,
    pub value: Complex<T>,
    pub magnitude: T,
    /// `Σ_{n≤t} |c_n| (|x(x−1)| ‖A‖ + |x| ‖B‖ + ‖C‖)`, `x = n + μ`, with `‖·‖` the
    /// largest coefficient modulus of the shifted polynomial.
    pub scale: T,
}

impl<T: Real> ResidualTerm<T> {
    /// `magnitude / scale` (zero when every contribution is zero).
    pub fn relative(&self) -> T {
        if self.scale == T::zero() {
            T::zero()
        } else {
            self.magnitude / self.scale
        }
    }
}

/// Expand `A v'' + B v' + C v` about `z₁` for `v = Σ_{n≤N} c_n (z − z₁)^{n+μ}` and
/// return the coefficients of the orders `t = 0..=N`, the ones the truncation fixes.
///
/// With the shifted coefficients `a_j, b_j, c_j`, order `t` collects
/// `Σ_n c_n F_{t−n}(n+μ)`, `F_j(x) = a_j x(x−1) + b_{j−1} x + c_{j−2}`.
pub fn residual_terms<T: Real>(
    op: &RationalOperator<T>,
    coeffs: &CoefficientSequence<T>,
    z1: Complex<T>,
) -> Vec<ResidualTerm<T>> {
    let sh = op.shifted(z1);
    let mu = coeffs.mu();
    let c = coeffs.coeffs();
    let f = coeffs.ln_scale().exp();
    let coef = |p: &crate::numerics::Polynomial<T>, j: isize| if j < 0 { Complex::zero() } else { p.coeff(j as usize) };
    let (na, nb, nc) = (sh.a.max_abs(), sh.b.max_abs(), sh.c.max_abs());
    (0..c.len())
        .map(|t| {
            let mut sum: Complex<T> = Complex::zero();
            let mut abs = T::zero();
            for (n, &cn) in c.iter().enumerate().take(t + 1) {
                let j = (t - n) as isize;
                let x = mu + cst::<T>(n as f64);
                let xx = x * (x - T::one());
                sum = sum + (coef(&sh.a, j) * xx + coef(&sh.b, j - 1) * x + coef(&sh.c, j - 2)) * cn;
                abs = abs + cn.norm() * (xx.norm() * na + x.norm() * nb + nc);
            }
            let value = sum * f;
            ResidualTerm { order: t, value, magnitude: value.norm(), scale: abs * f }
        })
        .collect()
}

/// Magnitudes of the determined residual coefficients (see [`residual_terms`]).
pub fn residual_power_series<T: Real>(op: &RationalOperator<T>, coeffs: &CoefficientSequence<T>, z1: Complex<T>) -> Vec<T> {
    residual_terms(op, coeffs, z1).into_iter().map(|r| r.magnitude).collect()
}

/// `max|c_n| ·` largest operator coefficient, a global scale for residual magnitudes.
pub fn residual_scale<T: Real>(op: &RationalOperator<T>, coeffs: &CoefficientSequence<T>) -> T {
    let m = coeffs.coeffs().iter().fold(T::zero(), |m, c| m.max(c.norm()));
    m * coeffs.ln_scale().exp() * op.coefficient_scale()
}

/// Waypoints from `from` to `to` that keep the argument of `z − z₁` inside
/// `(−π, π]`: an arc at the radius of `from`, then a radial segment.
pub fn polar_path<T: Real>(z1: Complex<T>, from: Complex<T>, to: Complex<T>) -> Vec<Complex<T>> {
    let (rb, tb) = (from - z1).to_polar();
    let (rp, tp) = (to - z1).to_polar();
    let steps = ((tp - tb).abs() / cst::<T>(0.05)).ceil().to_usize().unwrap_or(0).max(1);
    let mut path: Vec<Complex<T>> = (0..=steps)
        .map(|k| {
            let th = tb + (tp - tb) * cst::<T>(k as f64) / cst::<T>(steps as f64);
            z1 + Complex::from_polar(rb, th)
        })
        .collect();
    path[0] = from;
    if (rp - rb).abs() > T::zero() {
        path.push(to);
    } else {
        *path.last_mut().unwrap() = to;
    }
    path
}

/// Whether paths between probes must go around the center: the center is
/// singular for the equation or the exponent puts a branch cut through it.
fn needs_polar<T: Real>(series: &GammaSeries<T>) -> Result<bool> {
    let z1 = series.center();
    let sing = series.equation().operator().normalized()?.singular_points()?;
    let at_center = sing.iter().any(|s| (*s - z1).norm() <= cst::<T>(1e-12) * (T::one() + z1.norm()));
    Ok(at_center || near_integer(series.mu(), cst(1e-12)).is_none())
}

/// Integrate from the first probe, starting from the series' `(u, u')` there, to every
/// other probe; returns `max |u_series − u_RK| / (|u_RK| + 1)`.
pub fn compare<T: Real>(series: &GammaSeries<T>, probes: &[Complex<T>]) -> Result<T> {
    compare_with(series, probes, &RkOptions::default())
}

/// [`compare`] with explicit integrator settings.
pub fn compare_with<T: Real>(series: &GammaSeries<T>, probes: &[Complex<T>], opts: &RkOptions<T>) -> Result<T> {
    let base = *probes.first().ok_or_else(|| Error::Precondition("at least one probe".into()))?;
    let op = series.equation().operator().normalized()?;
    let e = series.evaluate(base)?;
    let start = SolutionSample { z: base, u: e.u, u_prime: e.u_prime };
    let polar = needs_polar(series)?;
    let mut worst = T::zero();
    for &z in &probes[1..] {
        let path = if polar { polar_path(series.center(), base, z) } else { vec![base, z] };
        let end = *integrate_operator(&op, start, &path, opts)?.last().unwrap();
        let us = series.evaluate(z)?.u;
        worst = worst.max((us - end.u).norm() / (end.u.norm() + T::one()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn polar_path_stays_on_its_sheet() {
        let z1 = c(0.0);
        let p = polar_path(z1, Complex::new(-0.3, 0.1), Complex::new(-0.2, -0.1));
        assert_eq!(p[0], Complex::new(-0.3, 0.1));
        assert_eq!(*p.last().unwrap(), Complex::new(-0.2, -0.1));
        // goes the long way round through the right half-plane
        assert!(p.iter().any(|z| z.re > 0.25));
        for w in p.windows(2) {
            assert!((w[1] - w[0]).norm() < 0.1);
        }
    }
}
