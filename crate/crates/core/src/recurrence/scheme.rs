use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::Zero;

use crate::equations::{ConfluentHeun, Variant, WeightSpec};
use crate::numerics::{cst, Real};
use crate::{Error, Result};

/// Where the series is centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Center {
    Origin,
    /// `z₀ = q/α`.
    ExtraSingularity,
}

/// Shape of `Λ(z) − Λ(z₁)`: linear, quadratic or cubic in `z − z₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExpansionType {
    I,
    IIQuadratic,
    IICubic,
}

impl ExpansionType {
    /// Power `p` of the Gamma argument `s (z − z₁)^p / p`.
    pub fn power(self) -> u32 {
        match self {
            ExpansionType::I => 1,
            ExpansionType::IIQuadratic => 2,
            ExpansionType::IICubic => 3,
        }
    }
}

/// The eleven catalogued expansion constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    ScheIOrigin,
    ScheIZ0,
    DcheIOrigin,
    DcheIZ0,
    BcheIOrigin,
    BcheIZ0,
    BcheIIOrigin,
    BcheIIZ0,
    TcheIZ0,
    TcheIIqZ0,
    TcheIIcZ0,
}

impl SchemeId {
    pub const ALL: [SchemeId; 11] = [
        SchemeId::ScheIOrigin,
        SchemeId::ScheIZ0,
        SchemeId::DcheIOrigin,
        SchemeId::DcheIZ0,
        SchemeId::BcheIOrigin,
        SchemeId::BcheIZ0,
        SchemeId::BcheIIOrigin,
        SchemeId::BcheIIZ0,
        SchemeId::TcheIZ0,
        SchemeId::TcheIIqZ0,
        SchemeId::TcheIIcZ0,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::ScheIOrigin => "sche-I-origin",
            SchemeId::ScheIZ0 => "sche-I-z0",
            SchemeId::DcheIOrigin => "dche-I-origin",
            SchemeId::DcheIZ0 => "dche-I-z0",
            SchemeId::BcheIOrigin => "bche-I-origin",
            SchemeId::BcheIZ0 => "bche-I-z0",
            SchemeId::BcheIIOrigin => "bche-II-origin",
            SchemeId::BcheIIZ0 => "bche-II-z0",
            SchemeId::TcheIZ0 => "tche-I-z0",
            SchemeId::TcheIIqZ0 => "tche-IIq-z0",
            SchemeId::TcheIIcZ0 => "tche-IIc-z0",
        }
    }

    pub fn variant(self) -> Variant {
        match self {
            SchemeId::ScheIOrigin | SchemeId::ScheIZ0 => Variant::Sche,
            SchemeId::DcheIOrigin | SchemeId::DcheIZ0 => Variant::Dche,
            SchemeId::BcheIOrigin | SchemeId::BcheIZ0 | SchemeId::BcheIIOrigin | SchemeId::BcheIIZ0 => Variant::Bche,
            SchemeId::TcheIZ0 | SchemeId::TcheIIqZ0 | SchemeId::TcheIIcZ0 => Variant::Tche,
        }
    }

    pub fn center(self) -> Center {
        match self {
            SchemeId::ScheIOrigin | SchemeId::DcheIOrigin | SchemeId::BcheIOrigin | SchemeId::BcheIIOrigin => Center::Origin,
            _ => Center::ExtraSingularity,
        }
    }

    pub fn expansion_type(self) -> ExpansionType {
        match self {
            SchemeId::BcheIIOrigin | SchemeId::BcheIIZ0 | SchemeId::TcheIIqZ0 => ExpansionType::IIQuadratic,
            SchemeId::TcheIIcZ0 => ExpansionType::IICubic,
            _ => ExpansionType::I,
        }
    }

    /// Schemes whose weight carries a free constant λ.
    pub fn has_free_lambda(self) -> bool {
        matches!(self, SchemeId::BcheIOrigin | SchemeId::BcheIZ0 | SchemeId::TcheIZ0 | SchemeId::TcheIIqZ0)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown scheme {:?}", s)))
    }
}

/// An expansion scheme with an optional λ override.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceScheme<T> {
    pub id: SchemeId,
    pub lambda: Option<Complex<T>>,
}

impl<T: Real> RecurrenceScheme<T> {
    pub fn new(id: SchemeId) -> Self {
        RecurrenceScheme { id, lambda: None }
    }

    pub fn with_lambda(id: SchemeId, lambda: Complex<T>) -> Self {
        RecurrenceScheme { id, lambda: Some(lambda) }
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    /// Default λ when none is given: `δ` for BCHE-I, `γ` for TCHE-I and
    /// `δ + 2z₀ε` for TCHE-IIq, each replaced by 1 when zero.
    pub fn default_lambda(id: SchemeId, eq: &ConfluentHeun<T>) -> Option<Complex<T>> {
        let pick = |x: Complex<T>| if x.is_zero() { Complex::new(T::one(), T::zero()) } else { x };
        match id {
            SchemeId::BcheIOrigin | SchemeId::BcheIZ0 => Some(pick(eq.delta)),
            SchemeId::TcheIZ0 => Some(pick(eq.gamma)),
            SchemeId::TcheIIqZ0 => {
                let z0 = if eq.alpha.is_zero() { Complex::zero() } else { eq.q / eq.alpha };
                Some(pick(eq.delta + eq.epsilon * z0 * cst::<T>(2.0)))
            }
            _ => None,
        }
    }

    /// The λ in effect for `eq` (`None` when the scheme has none).
    pub fn lambda_for(&self, eq: &ConfluentHeun<T>) -> Result<Option<Complex<T>>> {
        if !self.id.has_free_lambda() {
            return Ok(None);
        }
        let l = self.lambda.or_else(|| Self::default_lambda(self.id, eq));
        match l {
            Some(l) if l.is_zero() => Err(Error::Precondition("λ ≠ 0".into())),
            _ => Ok(l),
        }
    }

    /// Check the scheme's parameter preconditions.
    pub fn check(&self, eq: &ConfluentHeun<T>) -> Result<()> {
        if eq.variant != self.id.variant() {
            return Err(Error::Precondition(format!("scheme {} applies to {}", self.id, self.id.variant().name())));
        }
        if !eq.is_finite() {
            return Err(Error::Precondition("finite parameters".into()));
        }
        let needs_eps = matches!(
            self.id,
            SchemeId::ScheIOrigin
                | SchemeId::ScheIZ0
                | SchemeId::DcheIOrigin
                | SchemeId::DcheIZ0
                | SchemeId::BcheIIOrigin
                | SchemeId::BcheIIZ0
                | SchemeId::TcheIIcZ0
        );
        if needs_eps && eq.epsilon.is_zero() {
            return Err(Error::Precondition("ε ≠ 0".into()));
        }
        if self.id.center() == Center::ExtraSingularity && eq.alpha.is_zero() {
            return Err(Error::Precondition("α ≠ 0".into()));
        }
        if eq.variant == Variant::Dche && eq.gamma.is_zero() {
            return Err(Error::Precondition("γ ≠ 0".into()));
        }
        self.lambda_for(eq)?;
        Ok(())
    }

    /// Expansion center `z₁`: `0` or `z₀ = q/α`.
    pub fn center_point(&self, eq: &ConfluentHeun<T>) -> Result<Complex<T>> {
        match self.id.center() {
            Center::Origin => Ok(Complex::zero()),
            Center::ExtraSingularity => eq.extra_singularity(),
        }
    }

    /// The weight `Λ` of `v = e^{Λ} u'`.
    pub fn weight(&self, eq: &ConfluentHeun<T>) -> Result<WeightSpec<T>> {
        self.check(eq)?;
        let z1 = self.center_point(eq)?;
        let lam = self.lambda_for(eq)?;
        match self.id {
            SchemeId::ScheIOrigin | SchemeId::ScheIZ0 | SchemeId::DcheIOrigin | SchemeId::DcheIZ0 => {
                WeightSpec::linear(z1, eq.epsilon)
            }
            SchemeId::BcheIOrigin | SchemeId::BcheIZ0 => WeightSpec::linear(z1, lam.unwrap_or_default()),
            SchemeId::BcheIIOrigin | SchemeId::BcheIIZ0 => WeightSpec::monomial(z1, eq.epsilon, 2),
            SchemeId::TcheIZ0 => WeightSpec::monomial(z1, lam.unwrap_or_default(), 1),
            SchemeId::TcheIIqZ0 => WeightSpec::monomial(z1, lam.unwrap_or_default(), 2),
            SchemeId::TcheIIcZ0 => WeightSpec::monomial(z1, eq.epsilon, 3),
        }
    }
}
