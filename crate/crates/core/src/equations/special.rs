use num_complex::Complex;
use num_traits::Zero;

use super::{ConfluentHeun, Variant};
use crate::numerics::{cst, integrate_segment, kummer_1f1, ln, powc, QuadOptions, Real};
use crate::{Error, Result};

/// The catalogued closed-form cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormKind {
    /// `α = q = 0`: `u = C₁ + C₂ ∫ e^{−∫B/P}`, by numerical quadrature.
    TruncatedQuadrature,
    /// BCHE with `δ = q = 0`: Kummer functions of `−εz²/2`.
    BiconfluentKummer,
    /// TCHE with `γ = εq²/α²`, `δ = −2εq/α`: Kummer functions of `−ε(z−z₀)³/3`.
    TriconfluentKummer,
}

impl ClosedFormKind {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormKind::TruncatedQuadrature => "truncated-equation-quadrature",
            ClosedFormKind::BiconfluentKummer => "biconfluent-kummer-quadratic",
            ClosedFormKind::TriconfluentKummer => "triconfluent-kummer-cubic",
        }
    }
}

/// Two-constant general solution `u = C₁ u₁ + C₂ u₂` of a special case.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm<T> {
    pub kind: ClosedFormKind,
    eq: ConfluentHeun<T>,
    base: Complex<T>,
}

fn matches<T: Real>(x: Complex<T>, scale: T) -> bool {
    x.norm() <= cst::<T>(1e-12) * scale
}

/// Recognise the catalogued closed-form cases (checked in the order listed in
/// [`ClosedFormKind`]).
pub fn special_closed_form<T: Real>(eq: &ConfluentHeun<T>) -> Option<ClosedForm<T>> {
    let s = eq.scale();
    let kind = if matches(eq.alpha, s) && matches(eq.q, s) {
        ClosedFormKind::TruncatedQuadrature
    } else if eq.variant == Variant::Bche && matches(eq.delta, s) && matches(eq.q, s) && !eq.epsilon.is_zero() {
        ClosedFormKind::BiconfluentKummer
    } else if eq.variant == Variant::Tche && !eq.alpha.is_zero() && !eq.epsilon.is_zero() {
        let z0 = eq.q / eq.alpha;
        let g = eq.epsilon * z0 * z0;
        let d = -eq.epsilon * z0 * cst::<T>(2.0);
        if matches(eq.gamma - g, s * s * s) && matches(eq.delta - d, s * s) {
            ClosedFormKind::TriconfluentKummer
        } else {
            return None;
        }
    } else {
        return None;
    };
    let base = match eq.variant {
        Variant::Sche => Complex::new(cst(0.5), T::zero()),
        Variant::Dche | Variant::Bche => Complex::new(T::one(), T::zero()),
        Variant::Tche => Complex::zero(),
    };
    Some(ClosedForm { kind, eq: *eq, base })
}

impl<T: Real> ClosedForm<T> {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Lower limit of the quadrature (ignored by the Kummer cases).
    pub fn base(&self) -> Complex<T> {
        self.base
    }

    pub fn with_base(mut self, base: Complex<T>) -> Self {
        self.base = base;
        self
    }

    /// `e^{−∫B/P}` for the truncated equation, the derivative of the second solution.
    pub fn quadrature_integrand(&self, z: Complex<T>) -> Complex<T> {
        let e = &self.eq;
        let half = cst::<T>(0.5);
        let third = cst::<T>(1.0 / 3.0);
        let one = Complex::new(T::one(), T::zero());
        match e.variant {
            Variant::Sche => (-e.epsilon * z - e.delta * ln(one - z) - e.gamma * ln(z)).exp(),
            Variant::Dche => (-e.epsilon * z + e.gamma / z - e.delta * ln(z)).exp(),
            Variant::Bche => (-e.delta * z - e.epsilon * z * z * half - e.gamma * ln(z)).exp(),
            Variant::Tche => (-e.gamma * z - e.delta * z * z * half - e.epsilon * z * z * z * third).exp(),
        }
    }

    /// Values and derivatives of the two basis solutions at `z`.
    pub fn basis(&self, z: Complex<T>) -> Result<[(Complex<T>, Complex<T>); 2]> {
        let e = &self.eq;
        let one = Complex::new(T::one(), T::zero());
        match self.kind {
            ClosedFormKind::TruncatedQuadrature => {
                let g = |x: Complex<T>| self.quadrature_integrand(x);
                let i = integrate_segment(g, self.base, z, QuadOptions::default())?;
                Ok([(one, Complex::zero()), (i, g(z))])
            }
            ClosedFormKind::BiconfluentKummer => {
                let two = cst::<T>(2.0);
                let x = -e.epsilon * z * z / two;
                let dx = -e.epsilon * z;
                let a1 = e.alpha / (e.epsilon * two);
                let b1 = (one + e.gamma) / two;
                let u1 = kummer_1f1(a1, b1, x)?;
                let du1 = a1 / b1 * kummer_1f1(a1 + one, b1 + one, x)? * dx;
                let a2 = a1 + (one - e.gamma) / two;
                let b2 = (one * cst::<T>(3.0) - e.gamma) / two;
                let m = kummer_1f1(a2, b2, x)?;
                let dm = a2 / b2 * kummer_1f1(a2 + one, b2 + one, x)? * dx;
                let zp = powc(z, one - e.gamma);
                let dzp = if z.is_zero() { Complex::zero() } else { (one - e.gamma) * zp / z };
                Ok([(u1, du1), (zp * m, dzp * m + zp * dm)])
            }
            ClosedFormKind::TriconfluentKummer => {
                let three = cst::<T>(3.0);
                let z0 = e.q / e.alpha;
                let xi = z - z0;
                let x = -e.epsilon * xi * xi * xi / three;
                let dx = -e.epsilon * xi * xi;
                let a1 = e.alpha / (e.epsilon * three);
                let b1 = Complex::new(cst(2.0 / 3.0), T::zero());
                let u1 = kummer_1f1(a1, b1, x)?;
                let du1 = a1 / b1 * kummer_1f1(a1 + one, b1 + one, x)? * dx;
                let a2 = a1 + cst::<T>(1.0 / 3.0);
                let b2 = Complex::new(cst(4.0 / 3.0), T::zero());
                let m = kummer_1f1(a2, b2, x)?;
                let dm = a2 / b2 * kummer_1f1(a2 + one, b2 + one, x)? * dx;
                Ok([(u1, du1), (xi * m, m + xi * dm)])
            }
        }
    }

    /// `(u, u')` of `C₁ u₁ + C₂ u₂` at `z`.
    pub fn evaluate(&self, c1: Complex<T>, c2: Complex<T>, z: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let [b1, b2] = self.basis(z)?;
        let u = c1 * b1.0 + c2 * b2.0;
        let du = c1 * b1.1 + c2 * b2.1;
        if u.re.is_finite() && u.im.is_finite() && du.re.is_finite() && du.im.is_finite() {
            Ok((u, du))
        } else {
            Err(Error::Evaluation(format!("closed form not finite at {}", z)))
        }
    }

    /// Constants `(C₁, C₂)` reproducing `(u, u')` at `z`.
    pub fn match_constants(&self, z: Complex<T>, u: Complex<T>, du: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
        let [b1, b2] = self.basis(z)?;
        let det = b1.0 * b2.1 - b2.0 * b1.1;
        if det.is_zero() {
            return Err(Error::Degenerate(format!("basis Wronskian vanishes at {}", z)));
        }
        Ok(((u * b2.1 - du * b2.0) / det, (b1.0 * du - b1.1 * u) / det))
    }
}
