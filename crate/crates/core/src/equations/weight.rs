use num_complex::Complex;
use num_traits::Zero;

use crate::numerics::{cst, Polynomial, Real};
use crate::{Error, Result};

/// Weight `Λ(z)` of the weighted derivative `v = e^{Λ(z)} u'`, together with
/// the expansion center `z₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpec<T> {
    center: Complex<T>,
    lambda: Polynomial<T>,
}

impl<T: Real> WeightSpec<T> {
    /// `Λ` must have degree 1, 2 or 3.
    pub fn new(center: Complex<T>, lambda: Polynomial<T>) -> Result<Self> {
        match lambda.degree() {
            Some(1..=3) => Ok(WeightSpec { center, lambda }),
            _ => Err(Error::Precondition("Λ nonconstant of degree 1, 2 or 3".into())),
        }
    }

    /// `Λ(z) = s (z − z₁)^p / p`.
    pub fn monomial(center: Complex<T>, s: Complex<T>, p: u32) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Precondition("weight scale s ≠ 0".into()));
        }
        let lam = Polynomial::linear_root(center).pow(p).scale(s / cst::<T>(p as f64));
        Self::new(center, lam)
    }

    /// `Λ(z) = s z` (not re-centred), the linear weight used at both centers.
    pub fn linear(center: Complex<T>, s: Complex<T>) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Precondition("weight scale s ≠ 0".into()));
        }
        Self::new(center, Polynomial::new(vec![Complex::zero(), s]))
    }

    /// `Λ ≡ 0`: plain derivative, used to validate the derivation on equations
    /// without a weight.
    pub fn unweighted(center: Complex<T>) -> Self {
        WeightSpec { center, lambda: Polynomial::zero() }
    }

    pub fn center(&self) -> Complex<T> {
        self.center
    }

    pub fn lambda(&self) -> &Polynomial<T> {
        &self.lambda
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.lambda.eval(z)
    }

    /// `(s, p)` with `Λ(z) − Λ(z₁) = s (z − z₁)^p / p`.
    pub fn gamma_form(&self) -> Result<(Complex<T>, u32)> {
        let p = match self.lambda.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Precondition("weight is nonconstant".into())),
        };
        let sh = self.lambda.shift(self.center);
        let lead = sh.coeff(p);
        for k in 1..p {
            if sh.coeff(k).norm() > cst::<T>(1e-12) * lead.norm().max(T::one()) {
                return Err(Error::Precondition(
                    "Λ(z) − Λ(z₁) is a single power of (z − z₁)".into(),
                ));
            }
        }
        Ok((lead * cst::<T>(p as f64), p as u32))
    }
}
