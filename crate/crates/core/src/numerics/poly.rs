use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use super::{cst, Real};

/// Polynomial with complex coefficients, lowest degree first.
///
/// Trailing exact zeros are trimmed, so the zero polynomial has no
/// coefficients and any other polynomial has a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    /// Build from real coefficients, lowest degree first.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(cst(c), T::zero())).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex::new(T::one(), T::zero()))
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn x() -> Self {
        Self::new(vec![Complex::zero(), Complex::new(T::one(), T::zero())])
    }

    /// `z − r`.
    pub fn linear_root(r: Complex<T>) -> Self {
        Self::new(vec![-r, Complex::new(T::one(), T::zero())])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex<T>]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::linear_root(r))
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient of `z^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex<T> {
        self.coeffs.last().copied().unwrap_or_else(Complex::zero)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// True when every coefficient is at most `rel · scale` in modulus.
    pub fn is_negligible(&self, rel: T, scale: T) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= rel * scale)
    }

    /// Drop trailing coefficients below `rel` times the largest coefficient.
    pub fn trimmed(&self, rel: T) -> Self {
        let s = self.max_abs();
        let mut c = self.coeffs.clone();
        while let Some(l) = c.last() {
            if l.norm() <= rel * s {
                c.pop();
            } else {
                break;
            }
        }
        Polynomial { coeffs: c }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Sum of `|c_k| |z|^k`, the natural error scale of [`eval`](Self::eval).
    pub fn abs_eval(&self, z: Complex<T>) -> T {
        let r = z.norm();
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * cst::<T>(k as f64))
                .collect(),
        )
    }

    /// `p(z + c)`.
    pub fn shift(&self, c: Complex<T>) -> Self {
        // repeated synthetic division gives the Taylor coefficients at c
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1] * c;
                a[j] = a[j] + t;
            }
        }
        Self::new(a)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Complex::zero(); k];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    /// Divide by `z − r`, returning quotient and remainder.
    pub fn div_linear(&self, r: Complex<T>) -> (Self, Complex<T>) {
        if self.coeffs.is_empty() {
            return (Self::zero(), Complex::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![Complex::zero(); n - 1];
        let mut acc = Complex::zero();
        for k in (0..n).rev() {
            acc = acc * r + self.coeffs[k];
            if k > 0 {
                q[k - 1] = acc;
            }
        }
        (Self::new(q), acc)
    }

    /// Number of leading (low-order) coefficients below `rel · max|c|`.
    pub fn low_order(&self, rel: T) -> usize {
        let s = self.max_abs();
        self.coeffs.iter().take_while(|c| c.norm() <= rel * s).count()
    }

    /// Integer power.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl<T: Real> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})z", c)?,
                _ => write!(f, "({})z^{}", c, k)?,
            }
        }
        Ok(())
    }
}

impl<T: Real> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Real> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Real> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![Complex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j] + a * b;
            }
        }
        Polynomial::new(c)
    }
}

impl<T: Real> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

impl<T: Real> Add for Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        &self + &rhs
    }
}

impl<T: Real> Sub for Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        &self - &rhs
    }
}

impl<T: Real> Mul for Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        &self * &rhs
    }
}

impl<T: Real> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}
