//! The confluent Heun equations, the general Heun equation, and the equation
//! satisfied by the weighted derivative `v = e^{Λ} u'`.

mod operator;
mod special;
mod weight;

use num_complex::Complex;
use num_traits::Zero;

use crate::numerics::{cst, Polynomial, RationalFunction, Real};
use crate::{Error, Result};

pub use operator::{derive_v_equation, indicial_exponents, RationalOperator};
pub use special::{special_closed_form, ClosedForm, ClosedFormKind};
pub use weight::WeightSpec;

/// Which confluent Heun equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Single-confluent.
    Sche,
    /// Double-confluent.
    Dche,
    /// Bi-confluent.
    Bche,
    /// Tri-confluent.
    Tche,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Sche => "SCHE",
            Variant::Dche => "DCHE",
            Variant::Bche => "BCHE",
            Variant::Tche => "TCHE",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        match s.to_ascii_uppercase().as_str() {
            "SCHE" => Some(Variant::Sche),
            "DCHE" => Some(Variant::Dche),
            "BCHE" => Some(Variant::Bche),
            "TCHE" => Some(Variant::Tche),
            _ => None,
        }
    }
}

/// One of the four confluent Heun equations
/// `P(z) u'' + B(z) u' + (αz − q) u = 0`.
///
/// | variant | `P(z)`   | `B(z)`                    |
/// |---------|----------|---------------------------|
/// | SCHE    | `z(z−1)` | `εz² + (γ+δ−ε)z − γ`      |
/// | DCHE    | `z²`     | `γ + δz + εz²`            |
/// | BCHE    | `z`      | `γ + δz + εz²`            |
/// | TCHE    | `1`      | `γ + δz + εz²`            |
///
/// The single-confluent form is `u'' + (γ/z + δ/(z−1) + ε) u' + (αz−q)/(z(z−1)) u = 0`
/// with denominators cleared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfluentHeun<T> {
    pub variant: Variant,
    pub gamma: Complex<T>,
    pub delta: Complex<T>,
    pub epsilon: Complex<T>,
    pub alpha: Complex<T>,
    pub q: Complex<T>,
}

impl<T: Real> ConfluentHeun<T> {
    pub fn new(
        variant: Variant,
        gamma: Complex<T>,
        delta: Complex<T>,
        epsilon: Complex<T>,
        alpha: Complex<T>,
        q: Complex<T>,
    ) -> Self {
        ConfluentHeun { variant, gamma, delta, epsilon, alpha, q }
    }

    pub fn sche(gamma: Complex<T>, delta: Complex<T>, epsilon: Complex<T>, alpha: Complex<T>, q: Complex<T>) -> Self {
        Self::new(Variant::Sche, gamma, delta, epsilon, alpha, q)
    }

    pub fn dche(gamma: Complex<T>, delta: Complex<T>, epsilon: Complex<T>, alpha: Complex<T>, q: Complex<T>) -> Self {
        Self::new(Variant::Dche, gamma, delta, epsilon, alpha, q)
    }

    pub fn bche(gamma: Complex<T>, delta: Complex<T>, epsilon: Complex<T>, alpha: Complex<T>, q: Complex<T>) -> Self {
        Self::new(Variant::Bche, gamma, delta, epsilon, alpha, q)
    }

    pub fn tche(gamma: Complex<T>, delta: Complex<T>, epsilon: Complex<T>, alpha: Complex<T>, q: Complex<T>) -> Self {
        Self::new(Variant::Tche, gamma, delta, epsilon, alpha, q)
    }

    pub fn with_q(mut self, q: Complex<T>) -> Self {
        self.q = q;
        self
    }

    pub fn with_alpha(mut self, alpha: Complex<T>) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn is_finite(&self) -> bool {
        [self.gamma, self.delta, self.epsilon, self.alpha, self.q]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest parameter modulus (at least one); used as a tolerance scale.
    pub fn scale(&self) -> T {
        [self.gamma, self.delta, self.epsilon, self.alpha, self.q]
            .iter()
            .fold(T::one(), |m, c| m.max(c.norm()))
    }

    /// Leading coefficient `P(z)`.
    pub fn p_poly(&self) -> Polynomial<T> {
        match self.variant {
            Variant::Sche => Polynomial::from_real(&[0.0, -1.0, 1.0]),
            Variant::Dche => Polynomial::from_real(&[0.0, 0.0, 1.0]),
            Variant::Bche => Polynomial::from_real(&[0.0, 1.0]),
            Variant::Tche => Polynomial::one(),
        }
    }

    /// First-derivative coefficient.
    pub fn b_poly(&self) -> Polynomial<T> {
        match self.variant {
            Variant::Sche => Polynomial::new(vec![-self.gamma, self.gamma + self.delta - self.epsilon, self.epsilon]),
            _ => Polynomial::new(vec![self.gamma, self.delta, self.epsilon]),
        }
    }

    /// Potential `αz − q`.
    pub fn c_poly(&self) -> Polynomial<T> {
        Polynomial::new(vec![-self.q, self.alpha])
    }

    /// The equation as an operator `A u'' + B u' + C u` (not normalized).
    pub fn operator(&self) -> RationalOperator<T> {
        RationalOperator::new_unchecked(self.p_poly(), self.b_poly(), self.c_poly())
    }

    /// `z₀ = q/α`, the extra singular point of the derivative equation.
    pub fn extra_singularity(&self) -> Result<Complex<T>> {
        if self.alpha.is_zero() {
            return Err(Error::Degenerate("α = 0 puts z₀ at infinity".into()));
        }
        Ok(self.q / self.alpha)
    }

    /// Finite singular points of the equation for `u`.
    pub fn singular_points(&self) -> Vec<Complex<T>> {
        match self.variant {
            Variant::Sche => vec![Complex::zero(), Complex::new(T::one(), T::zero())],
            Variant::Dche | Variant::Bche => vec![Complex::zero()],
            Variant::Tche => vec![],
        }
    }

    /// ODE residual `P u'' + B u' + C u` and the sum of the moduli of its three terms.
    pub fn residual(&self, z: Complex<T>, u: Complex<T>, u1: Complex<T>, u2: Complex<T>) -> (Complex<T>, T) {
        self.operator().residual(z, u, u1, u2)
    }
}

/// General Heun equation
/// `u'' + (γ/z + δ/(z−1) + ε/(z−a)) u' + (αβz − q)/(z(z−1)(z−a)) u = 0`
/// with the Fuchs condition `γ + δ + ε = α + β + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralHeun<T> {
    pub a: Complex<T>,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub gamma: Complex<T>,
    pub delta: Complex<T>,
    pub epsilon: Complex<T>,
    pub q: Complex<T>,
}

impl<T: Real> GeneralHeun<T> {
    pub fn new(
        a: Complex<T>,
        alpha: Complex<T>,
        beta: Complex<T>,
        gamma: Complex<T>,
        delta: Complex<T>,
        epsilon: Complex<T>,
        q: Complex<T>,
    ) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        if a.is_zero() || a == one {
            return Err(Error::Precondition("a ∉ {0, 1}".into()));
        }
        let fuchs = gamma + delta + epsilon - alpha - beta - one;
        let scale = [alpha, beta, gamma, delta, epsilon].iter().fold(T::one(), |m, c| m.max(c.norm()));
        if fuchs.norm() > cst::<T>(1e-12) * scale {
            return Err(Error::Precondition("Fuchs condition γ + δ + ε = α + β + 1".into()));
        }
        Ok(GeneralHeun { a, alpha, beta, gamma, delta, epsilon, q })
    }

    /// Cleared operator, built from the normal form by rational-function algebra.
    pub fn operator(&self) -> Result<RationalOperator<T>> {
        let pole = |c: Complex<T>, r: Complex<T>| {
            RationalFunction::new(Polynomial::constant(c), Polynomial::linear_root(r))
        };
        let zero = Complex::zero();
        let one = Complex::new(T::one(), T::zero());
        let f = pole(self.gamma, zero)?.add(&pole(self.delta, one)?)?.add(&pole(self.epsilon, self.a)?)?;
        let g = RationalFunction::new(
            Polynomial::new(vec![-self.q, self.alpha * self.beta]),
            Polynomial::from_roots(&[zero, one, self.a]),
        )?;
        RationalOperator::from_normal_form(&f, &g)
    }
}
