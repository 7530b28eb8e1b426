//! Evaluable incomplete-Gamma series for `u`.
//!
//! With `w = z − z₁`, `Λ(z) − Λ(z₁) = s wᵖ/p` and `t = s wᵖ/p`, integrating
//! `u' = e^{−Λ(z)} Σ c_n w^{n+μ}` term by term gives
//!
//! ```text
//! u(z) = C₀ − e^{−Λ(z₁)} Σ c_n Γ(a_n; t) / (p (s/p)^{a_n}),     a_n = (1+n+μ)/p.
//! ```
//!
//! The series is evaluated in the equivalent lower form
//!
//! ```text
//! u(z) = K + (e^{−Λ(z₁)}/p) Σ c_n w^{1+n+μ} φ(a_n, t),     φ(a, t) = t^{−a} γ(a, t),
//! ```
//!
//! which avoids the cancellation between `C₀` and the complete `Γ(a_n)` and is
//! single valued in `w` for every `p`.  `K = C₀ − e^{−Λ(z₁)} Σ c_n Γ(a_n)/(p (s/p)^{a_n})`.
//! A term whose `a_n` is a non-positive integer keeps the upper form.

use num_complex::Complex;
use num_traits::Zero;

use crate::equations::{derive_v_equation, indicial_exponents, ConfluentHeun, RationalOperator, WeightSpec};
use crate::numerics::{cst, gamma, is_finite, lower_gamma_scaled, near_integer, polynomial_roots, powc, upper_incomplete_gamma, Real};
use crate::recurrence::{build_recurrence, CoefficientSequence, RecurrenceScheme};
use crate::{Error, Result};

/// Largest truncation order chosen by [`truncation_order`].
pub const MAX_AUTO_ORDER: usize = 200;
/// Terms spanning more than this ratio in modulus are summed largest first.
const SORT_SPAN: f64 = 1e8;

/// Value and derivative of `u` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation<T> {
    pub u: Complex<T>,
    pub u_prime: Complex<T>,
    /// `z` lies outside the disk where the Frobenius series of `v` is guaranteed to converge.
    pub outside_region: bool,
}

/// An assembled Gamma series.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSeries<T> {
    eq: ConfluentHeun<T>,
    scheme: RecurrenceScheme<T>,
    weight: WeightSpec<T>,
    z1: Complex<T>,
    coeffs: CoefficientSequence<T>,
    s: Complex<T>,
    p: u32,
    prefactor: Complex<T>,
    constant: Complex<T>,
    radius: T,
    irregular: bool,
}

fn sum_stable<T: Real>(mut terms: Vec<Complex<T>>) -> Complex<T> {
    let (lo, hi) = terms.iter().filter(|t| !t.is_zero()).fold((T::infinity(), T::zero()), |(lo, hi), t| {
        let m = t.norm();
        (lo.min(m), hi.max(m))
    });
    if hi > lo * cst(SORT_SPAN) {
        terms.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap_or(std::cmp::Ordering::Equal));
    }
    terms.into_iter().fold(Complex::zero(), |acc, t| acc + t)
}

/// Distance from the scheme's center to the nearest other finite singular point
/// of the operator for `v` (`∞` when there is none).
pub fn convergence_radius<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>) -> Result<T> {
    let weight = scheme.weight(eq)?;
    let op = derive_v_equation(&eq.operator(), &weight)?;
    radius_of(&op, weight.center())
}

fn radius_of<T: Real>(op: &RationalOperator<T>, z1: Complex<T>) -> Result<T> {
    if op.a.degree().unwrap_or(0) == 0 {
        return Ok(T::infinity());
    }
    let tol = cst::<T>(1e-8) * (T::one() + z1.norm());
    Ok(polynomial_roots(&op.a)?
        .into_iter()
        .map(|r| (r - z1).norm())
        .filter(|&d| d > tol)
        .fold(T::infinity(), T::min))
}

/// Assemble the series of `scheme` for exponent `mu` with coefficients `c_0..=c_N`.
/// The integration constant is left at zero.
pub fn assemble<T: Real>(
    eq: &ConfluentHeun<T>,
    scheme: &RecurrenceScheme<T>,
    mu: Complex<T>,
    n_max: usize,
) -> Result<GammaSeries<T>> {
    let rel = build_recurrence(eq, scheme)?;
    let coeffs = rel.generate(mu, n_max)?;
    GammaSeries::from_coefficients(eq, scheme, coeffs)
}

/// Assemble with the first admissible exponent whose recurrence runs through;
/// falls back to the next exponent on a vanishing leading coefficient.
pub fn assemble_auto<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>, n_max: usize) -> Result<GammaSeries<T>> {
    let rel = build_recurrence(eq, scheme)?;
    let ex = rel.exponents()?;
    let mut last = Error::Degenerate("no admissible exponent".into());
    for mu in ex.admissible {
        match rel.generate(mu, n_max) {
            Ok(c) => return GammaSeries::from_coefficients(eq, scheme, c),
            Err(e @ Error::DegenerateIndex { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// Smallest `N` (at most [`MAX_AUTO_ORDER`]) for which the last terms of the `v`
/// series contribute less than `1e−12` of the running sum at every point.
pub fn truncation_order<T: Real>(
    eq: &ConfluentHeun<T>,
    scheme: &RecurrenceScheme<T>,
    mu: Complex<T>,
    points: &[Complex<T>],
) -> Result<usize> {
    let rel = build_recurrence(eq, scheme)?;
    let c = rel.generate(mu, MAX_AUTO_ORDER)?;
    let z1 = rel.center();
    let window = rel.k() - 1;
    let mut need = 1;
    for &z in points {
        let w = (z - z1).norm();
        let mut run = Complex::zero();
        let mut mags = Vec::with_capacity(MAX_AUTO_ORDER + 1);
        let mut found = MAX_AUTO_ORDER;
        for n in 0..=MAX_AUTO_ORDER {
            let t = c.coeffs()[n] * w.powi(n as i32);
            run = run + t;
            mags.push(t.norm());
            if n >= window && mags[n + 1 - window..].iter().all(|&m| m <= cst::<T>(1e-12) * run.norm()) {
                found = n;
                break;
            }
        }
        need = need.max(found);
    }
    Ok(need)
}

impl<T: Real> GammaSeries<T> {
    /// Wrap an already generated coefficient sequence.
    pub fn from_coefficients(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>, coeffs: CoefficientSequence<T>) -> Result<Self> {
        if coeffs.scheme() != scheme.id {
            return Err(Error::Precondition(format!("coefficients belong to scheme {}", coeffs.scheme())));
        }
        let weight = scheme.weight(eq)?;
        let (s, p) = weight.gamma_form()?;
        if s.is_zero() {
            return Err(Error::Precondition("s ≠ 0".into()));
        }
        if p != scheme.id.expansion_type().power() {
            return Err(Error::Precondition(format!("weight power {} matches the expansion type", p)));
        }
        let z1 = weight.center();
        let op = derive_v_equation(&eq.operator(), &weight)?;
        let radius = radius_of(&op, z1)?;
        let irregular = matches!(indicial_exponents(&op, z1), Err(Error::Irregular(_)));
        let prefactor = (-weight.eval(z1)).exp();
        Ok(GammaSeries {
            eq: *eq,
            scheme: *scheme,
            weight,
            z1,
            coeffs,
            s,
            p,
            prefactor,
            constant: Complex::zero(),
            radius,
            irregular,
        })
    }

    pub fn equation(&self) -> &ConfluentHeun<T> {
        &self.eq
    }

    pub fn scheme(&self) -> &RecurrenceScheme<T> {
        &self.scheme
    }

    pub fn weight(&self) -> &WeightSpec<T> {
        &self.weight
    }

    /// Expansion center `z₁`.
    pub fn center(&self) -> Complex<T> {
        self.z1
    }

    pub fn mu(&self) -> Complex<T> {
        self.coeffs.mu()
    }

    pub fn coefficients(&self) -> &CoefficientSequence<T> {
        &self.coeffs
    }

    /// Weight scale `s`.
    pub fn s(&self) -> Complex<T> {
        self.s
    }

    /// Weight power `p`.
    pub fn p(&self) -> u32 {
        self.p
    }

    /// `e^{−Λ(z₁)}`.
    pub fn prefactor(&self) -> Complex<T> {
        self.prefactor
    }

    /// Gamma parameter `a_n = (1+n+μ)/p`.
    pub fn gamma_parameter(&self, n: usize) -> Complex<T> {
        (self.mu() + cst::<T>((n + 1) as f64)) / cst::<T>(self.p as f64)
    }

    /// Integration constant `K` of the lower form.
    pub fn constant(&self) -> Complex<T> {
        self.constant
    }

    pub fn set_constant(&mut self, k: Complex<T>) {
        self.constant = k;
    }

    /// Radius of the disk about `z₁` in which the series for `v` converges.
    pub fn convergence_radius(&self) -> T {
        self.radius
    }

    /// The center is an irregular singular point of the equation for `v`; the
    /// series is then asymptotic rather than convergent.
    pub fn center_is_irregular(&self) -> bool {
        self.irregular
    }

    /// Keep terms `0..=n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.coeffs = self.coeffs.truncated(n);
        s
    }

    fn scale_factor(&self) -> T {
        self.coeffs.ln_scale().exp()
    }

    fn check_finite(&self, v: Complex<T>, what: &str, z: Complex<T>) -> Result<Complex<T>> {
        if is_finite(v) {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("{} not finite at {}", what, z)))
        }
    }

    /// `(v, v')` with `v = Σ c_n (z − z₁)^{n+μ}`.
    pub fn v_series(&self, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let w = z - self.z1;
        let mu = self.mu();
        if w.is_zero() {
            return self.v_at_center();
        }
        let wmu = powc(w, mu);
        let mut wn = Complex::new(T::one(), T::zero());
        let mut v = Vec::with_capacity(self.coeffs.coeffs().len());
        let mut dv = Vec::with_capacity(self.coeffs.coeffs().len());
        for (n, &c) in self.coeffs.coeffs().iter().enumerate() {
            let t = c * wn * wmu;
            v.push(t);
            dv.push(t * (mu + cst::<T>(n as f64)) / w);
            wn = wn * w;
        }
        let f = self.scale_factor();
        let v = self.check_finite(sum_stable(v) * f, "v", z)?;
        let dv = self.check_finite(sum_stable(dv) * f, "v'", z)?;
        Ok((v, dv))
    }

    fn v_at_center(&self) -> Result<(Complex<T>, Complex<T>)> {
        let mu = self.mu();
        let f = self.scale_factor();
        let c = self.coeffs.coeffs();
        // only integer exponents 0 and 1 leave v or v' finite and nonzero at w = 0
        let zero = Complex::zero();
        match near_integer(mu, cst(1e-12)) {
            Some(m) if m >= 0 => {
                let v = if m == 0 { c[0] * f } else { zero };
                let dv = match m {
                    0 => c.get(1).copied().unwrap_or(zero) * f,
                    1 => c[0] * f,
                    _ => zero,
                };
                Ok((v, dv))
            }
            _ if mu.re > T::one() => Ok((zero, zero)),
            _ => Err(Error::Evaluation(format!("v is singular at the center for μ = {}", mu))),
        }
    }

    /// `u` recovered from `v` alone: `u = −e^{−Λ}(A v' + (B − AΛ')v)/C`.
    pub fn reconstruct(&self, z: Complex<T>) -> Result<Complex<T>> {
        let c = self.eq.c_poly().eval(z);
        let scale = self.eq.alpha.norm() * z.norm() + self.eq.q.norm();
        if c.norm() <= cst::<T>(1e-10) * scale || c.is_zero() {
            return Err(Error::SingularRef(format!("αz − q = 0 at {}", z)));
        }
        let (v, dv) = self.v_series(z)?;
        let a = self.eq.p_poly().eval(z);
        let b = self.eq.b_poly().eval(z);
        let dl = self.weight.lambda().derivative().eval(z);
        let u = -(-self.weight.eval(z)).exp() * (a * dv + (b - a * dl) * v) / c;
        self.check_finite(u, "reconstructed u", z)
    }

    /// `Σ` part of the lower form, without `K`.
    fn lower_sum(&self, z: Complex<T>) -> Result<Complex<T>> {
        let w = z - self.z1;
        let mu = self.mu();
        let pf = cst::<T>(self.p as f64);
        let t = self.s * w.powi(self.p as i32) / pf;
        let wmu = if w.is_zero() { Complex::zero() } else { powc(w, mu) };
        let mut wn = w;
        let mut terms = Vec::with_capacity(self.coeffs.coeffs().len());
        for (n, &c) in self.coeffs.coeffs().iter().enumerate() {
            let a = self.gamma_parameter(n);
            let b = mu + cst::<T>((n + 1) as f64);
            if c.is_zero() {
                wn = wn * w;
                continue;
            }
            let term = match near_integer(a, cst(1e-12)).filter(|&k| k <= 0) {
                Some(_) => -c * self.upper_term(a, t)?,
                None if w.is_zero() => {
                    if b.re > T::zero() {
                        Complex::zero()
                    } else {
                        return Err(Error::Evaluation(format!("term {} is singular at the center", n)));
                    }
                }
                None => c * wn * wmu * lower_gamma_scaled(a, t)? / pf,
            };
            terms.push(term);
            wn = wn * w;
        }
        let v = sum_stable(terms) * self.prefactor * self.scale_factor();
        self.check_finite(v, "u", z)
    }

    /// `Γ(a; t)/(p (s/p)^a)`.
    fn upper_term(&self, a: Complex<T>, t: Complex<T>) -> Result<Complex<T>> {
        let pf = cst::<T>(self.p as f64);
        Ok(upper_incomplete_gamma(a, t)? / (powc(self.s / pf, a) * pf))
    }

    /// `u` and `u'` at `z`.
    pub fn evaluate(&self, z: Complex<T>) -> Result<Evaluation<T>> {
        let u = self.constant + self.lower_sum(z)?;
        let w = z - self.z1;
        let t = self.s * w.powi(self.p as i32) / cst::<T>(self.p as f64);
        let (v, _) = self.v_series(z)?;
        let u_prime = self.check_finite(self.prefactor * (-t).exp() * v, "u'", z)?;
        Ok(Evaluation { u, u_prime, outside_region: w.norm() >= self.radius })
    }

    /// `u'' = e^{−Λ}(v' − Λ'v)`.
    pub fn second_derivative(&self, z: Complex<T>) -> Result<Complex<T>> {
        let (v, dv) = self.v_series(z)?;
        let dl = self.weight.lambda().derivative().eval(z);
        self.check_finite((-self.weight.eval(z)).exp() * (dv - dl * v), "u''", z)
    }

    /// Fix `K` so that the series agrees with the reconstruction at `z_ref`; returns `K`.
    pub fn fix_constant_at(&mut self, z_ref: Complex<T>) -> Result<Complex<T>> {
        let w = z_ref - self.z1;
        if w.norm() >= self.radius {
            return Err(Error::Region(format!("reference point {} outside the convergence disk", z_ref)));
        }
        let u_ref = self.reconstruct(z_ref)?;
        let k = u_ref - self.lower_sum(z_ref)?;
        self.constant = self.check_finite(k, "integration constant", z_ref)?;
        Ok(self.constant)
    }

    /// [`fix_constant_at`](Self::fix_constant_at) at the default reference point
    /// `z₁ + ρe^{iθ}`, `ρ = 0.3·min(radius, 1)`, trying further angles if `αz − q`
    /// vanishes there.
    pub fn fix_constant(&mut self) -> Result<Complex<T>> {
        let rho = cst::<T>(0.3) * self.radius.min(T::one());
        if rho.is_nan() || rho <= T::zero() {
            return Err(Error::Region("convergence disk is empty".into()));
        }
        let mut last = Error::SingularRef("no reference point".into());
        for k in 0..8 {
            let theta = cst::<T>(0.7 + 0.9 * k as f64);
            let z = self.z1 + Complex::from_polar(rho, theta);
            match self.fix_constant_at(z) {
                Err(e @ Error::SingularRef(_)) => last = e,
                other => return other,
            }
        }
        Err(last)
    }

    /// The reference point [`fix_constant`](Self::fix_constant) would use first.
    pub fn default_reference(&self) -> Complex<T> {
        let rho = cst::<T>(0.3) * self.radius.min(T::one());
        self.z1 + Complex::from_polar(rho, cst(0.7))
    }

    /// Constant `C₀` of the upper form `u = C₀ − e^{−Λ(z₁)} Σ c_n Γ(a_n; t)/(p (s/p)^{a_n})`.
    pub fn upper_constant(&self) -> Result<Complex<T>> {
        let pf = cst::<T>(self.p as f64);
        let mut terms = Vec::with_capacity(self.coeffs.coeffs().len());
        for (n, &c) in self.coeffs.coeffs().iter().enumerate() {
            let a = self.gamma_parameter(n);
            if c.is_zero() || near_integer(a, cst(1e-12)).is_some_and(|k| k <= 0) {
                continue;
            }
            terms.push(c * gamma(a)? / (powc(self.s / pf, a) * pf));
        }
        let v = self.constant + sum_stable(terms) * self.prefactor * self.scale_factor();
        self.check_finite(v, "C₀", self.z1)
    }

    /// `u` from the upper form with principal powers.  Agrees with
    /// [`evaluate`](Self::evaluate) where `t^a = (s/p)^a w^{pa}` holds on the principal branch.
    pub fn evaluate_upper(&self, z: Complex<T>) -> Result<Complex<T>> {
        let c0 = self.upper_constant()?;
        let w = z - self.z1;
        let t = self.s * w.powi(self.p as i32) / cst::<T>(self.p as f64);
        let mut terms = Vec::with_capacity(self.coeffs.coeffs().len());
        for (n, &c) in self.coeffs.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push(c * self.upper_term(self.gamma_parameter(n), t)?);
            }
        }
        let v = c0 - sum_stable(terms) * self.prefactor * self.scale_factor();
        self.check_finite(v, "u", z)
    }
}

/// Fix the integration constant of `series` at `z_ref`; returns the constant `K`.
pub fn determine_c0<T: Real>(series: &mut GammaSeries<T>, z_ref: Complex<T>) -> Result<Complex<T>> {
    series.fix_constant_at(z_ref)
}
