use num_complex::Complex;

use super::{cst, polynomial_roots, Polynomial, Real};
use crate::{Error, Result};

/// Quotient of two polynomials with common factors cancelled.
///
/// Normalization finds the roots of the denominator and divides out every
/// root at which the numerator vanishes to `1e-12` relative.  The denominator
/// is made monic.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Real> RationalFunction<T> {
    pub fn new(num: Polynomial<T>, den: Polynomial<T>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Precondition("denominator is not the zero polynomial".into()));
        }
        let mut r = RationalFunction { num, den };
        r.normalize()?;
        Ok(r)
    }

    pub fn from_polynomial(p: Polynomial<T>) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.den
    }

    fn normalize(&mut self) -> Result<()> {
        let tol = cst::<T>(1e-12).max(T::epsilon() * cst(64.0));
        if self.num.is_zero() {
            self.den = Polynomial::one();
            return Ok(());
        }
        if self.den.degree().unwrap_or(0) >= 1 {
            let roots = polynomial_roots(&self.den)?;
            for r in roots {
                if self.num.is_zero() || self.num.degree() == Some(0) {
                    break;
                }
                let v = self.num.eval(r).norm();
                if v <= tol * self.num.abs_eval(r) {
                    let (qn, _) = self.num.div_linear(r);
                    let (qd, rem) = self.den.div_linear(r);
                    if rem.norm() <= tol * self.den.abs_eval(r).max(T::one()) {
                        self.num = qn;
                        self.den = qd;
                    }
                }
            }
        }
        let l = self.den.leading();
        self.num = self.num.scale(l.inv());
        self.den = self.den.scale(l.inv());
        Ok(())
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let n = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(n, &self.den * &other.den)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn derivative(&self) -> Result<Self> {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }
}
