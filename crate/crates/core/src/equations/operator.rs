use num_complex::Complex;
use num_traits::Zero;

use super::WeightSpec;
use crate::numerics::{cluster_roots, cst, polynomial_roots, Polynomial, RationalFunction, Real};
use crate::{Error, Result};

/// Cancellation tolerance for common factors of `A`, `B`, `C`.
const CANCEL_TOL: f64 = 1e-10;

/// Second-order operator `A(z) y'' + B(z) y' + C(z) y` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalOperator<T> {
    pub a: Polynomial<T>,
    pub b: Polynomial<T>,
    pub c: Polynomial<T>,
}

fn vanishes_at<T: Real>(p: &Polynomial<T>, r: Complex<T>, tol: T) -> bool {
    p.is_zero() || p.eval(r).norm() <= tol * p.abs_eval(r)
}

impl<T: Real> RationalOperator<T> {
    /// Operator with common factors removed.
    pub fn new(a: Polynomial<T>, b: Polynomial<T>, c: Polynomial<T>) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Precondition("leading coefficient A is not the zero polynomial".into()));
        }
        RationalOperator { a, b, c }.normalized()
    }

    pub(crate) fn new_unchecked(a: Polynomial<T>, b: Polynomial<T>, c: Polynomial<T>) -> Self {
        RationalOperator { a, b, c }
    }

    /// Clear denominators of `y'' + f y' + g y` with the lcm of the two denominators.
    pub fn from_normal_form(f: &RationalFunction<T>, g: &RationalFunction<T>) -> Result<Self> {
        let df = f.denominator();
        let dg = g.denominator();
        let (lcm, mf, mg) = lcm(df, dg)?;
        Self::new(lcm, f.numerator() * &mf, g.numerator() * &mg)
    }

    /// Divide out every root of `A` at which `B` and `C` also vanish (relative tolerance `1e-10`).
    pub fn normalized(&self) -> Result<Self> {
        let tol = cst::<T>(CANCEL_TOL).max(T::epsilon() * cst(64.0));
        let mut op = self.clone();
        'outer: loop {
            if op.a.degree().unwrap_or(0) == 0 {
                break;
            }
            let roots = cluster_roots(&polynomial_roots(&op.a)?, cst(1e-6));
            for (r, _) in roots {
                if vanishes_at(&op.b, r, tol) && vanishes_at(&op.c, r, tol) {
                    op.a = op.a.div_linear(r).0;
                    if !op.b.is_zero() {
                        op.b = op.b.div_linear(r).0;
                    }
                    if !op.c.is_zero() {
                        op.c = op.c.div_linear(r).0;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        Ok(op)
    }

    /// Distinct finite singular points (roots of `A` after normalization).
    pub fn singular_points(&self) -> Result<Vec<Complex<T>>> {
        let op = self.normalized()?;
        if op.a.degree().unwrap_or(0) == 0 {
            return Ok(Vec::new());
        }
        let roots = polynomial_roots(&op.a)?;
        Ok(cluster_roots(&roots, cst(1e-6)).into_iter().map(|(r, _)| r).collect())
    }

    /// `A y'' + B y' + C y` at `z` and the sum of the moduli of the three terms.
    pub fn residual(&self, z: Complex<T>, y: Complex<T>, y1: Complex<T>, y2: Complex<T>) -> (Complex<T>, T) {
        let ta = self.a.eval(z) * y2;
        let tb = self.b.eval(z) * y1;
        let tc = self.c.eval(z) * y;
        (ta + tb + tc, ta.norm() + tb.norm() + tc.norm())
    }

    /// `y''` from the equation.
    pub fn second_derivative(&self, z: Complex<T>, y: Complex<T>, y1: Complex<T>) -> Complex<T> {
        -(self.b.eval(z) * y1 + self.c.eval(z) * y) / self.a.eval(z)
    }

    /// All three coefficients re-expanded about `z1`.
    pub fn shifted(&self, z1: Complex<T>) -> Self {
        RationalOperator { a: self.a.shift(z1), b: self.b.shift(z1), c: self.c.shift(z1) }
    }

    /// Largest coefficient modulus of `A`, `B`, `C`.
    pub fn coefficient_scale(&self) -> T {
        self.a.max_abs().max(self.b.max_abs()).max(self.c.max_abs())
    }
}

/// Operator satisfied by `v = e^{Λ} u'` when `u` solves `op_u`.
///
/// With `u' = e^{−Λ} v` the original equation and its derivative are combined
/// to eliminate `u`:
///
/// ```text
/// A_v = C·A
/// B_v = C(A' + B − AΛ') − A(C' + Λ'C)
/// C_v = C(B' − A'Λ' − AΛ'') − (C' + Λ'C)(B − AΛ') + C²
/// ```
///
/// The result is normalized.  `u` is recovered from `v` as
/// `u = −e^{−Λ}(A v' + (B − AΛ') v)/C`.
pub fn derive_v_equation<T: Real>(op_u: &RationalOperator<T>, w: &WeightSpec<T>) -> Result<RationalOperator<T>> {
    let (a, b, c) = (&op_u.a, &op_u.b, &op_u.c);
    if c.is_zero() {
        return Err(Error::Degenerate("potential C ≡ 0: u' solves a first-order equation".into()));
    }
    let l1 = w.lambda().derivative();
    let l2 = l1.derivative();
    let da = a.derivative();
    let db = b.derivative();
    let dc = c.derivative();
    let b_minus = b - &(a * &l1);
    let cl = &dc + &(&l1 * c);
    let av = c * a;
    let bv = &(c * &(&da + &b_minus)) - &(a * &cl);
    let cv = &(&(c * &(&(&db - &(&da * &l1)) - &(a * &l2))) - &(&cl * &b_minus)) + &(c * c);
    RationalOperator::new(av, bv, cv)
}

/// `(lcm, lcm/p, lcm/q)` for monic `p`, `q`.
fn lcm<T: Real>(p: &Polynomial<T>, q: &Polynomial<T>) -> Result<(Polynomial<T>, Polynomial<T>, Polynomial<T>)> {
    let tol = cst::<T>(1e-12);
    // factors of q not already in p
    let mut extra = Polynomial::one();
    let mut rest = p.clone();
    if q.degree().unwrap_or(0) > 0 {
        for (r, k) in cluster_roots(&polynomial_roots(q)?, cst(1e-6)) {
            for _ in 0..k {
                let (quot, rem) = rest.div_linear(r);
                if rest.degree().unwrap_or(0) > 0 && rem.norm() <= tol * rest.abs_eval(r) {
                    rest = quot;
                } else {
                    extra = &extra * &Polynomial::linear_root(r);
                }
            }
        }
    }
    // lcm = p·extra; lcm/q = rest (the part of p not shared with q)
    Ok((p * &extra, extra, rest))
}

fn stable_quadratic<T: Real>(p: Complex<T>, q: Complex<T>) -> [Complex<T>; 2] {
    // μ² + pμ + q = 0
    let disc = (p * p - q * cst::<T>(4.0)).sqrt();
    let s = if (p.conj() * disc).re >= T::zero() { -(p + disc) } else { disc - p };
    let r1 = s * cst::<T>(0.5);
    let r2 = if r1.is_zero() { Complex::zero() } else { q / r1 };
    let mut r = [r1, r2];
    if r[1].re > r[0].re {
        r.swap(0, 1);
    }
    r
}

/// Characteristic exponents of `op` at the regular singular point `z_pt`,
/// ordered by decreasing real part.
pub fn indicial_exponents<T: Real>(op: &RationalOperator<T>, z_pt: Complex<T>) -> Result<[Complex<T>; 2]> {
    let op = op.normalized()?.shifted(z_pt);
    let tol = cst::<T>(CANCEL_TOL);
    // order of vanishing of each coefficient at the point
    let ord = |p: &Polynomial<T>| -> usize {
        if p.is_zero() {
            return usize::MAX;
        }
        let s = p.max_abs();
        p.coeffs().iter().take_while(|c| c.norm() <= tol * s).count()
    };
    let m = ord(&op.a);
    if m == 0 {
        return Err(Error::NotSingular(format!("{} is an ordinary point", z_pt)));
    }
    let ob = ord(&op.b);
    let oc = ord(&op.c);
    if ob < m - 1 || (m >= 2 && oc < m - 2) {
        return Err(Error::Irregular(format!("{} is an irregular singular point", z_pt)));
    }
    let am = op.a.coeff(m);
    let p0 = op.b.coeff(m - 1) / am;
    let q0 = if m >= 2 { op.c.coeff(m - 2) / am } else { Complex::zero() };
    Ok(stable_quadratic(p0 - Complex::new(T::one(), T::zero()), q0))
}
