use num_complex::Complex;
use num_traits::Zero;

use super::{cst, Polynomial, Real};
use crate::{Error, Result};

const MAX_ITER: usize = 500;

/// All roots of `p` with multiplicity (Aberth–Ehrlich, then Newton polish).
///
/// Exact zero low-order coefficients are split off first so roots at the
/// origin come out exactly.
pub fn polynomial_roots<T: Real>(p: &Polynomial<T>) -> Result<Vec<Complex<T>>> {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Precondition("polynomial degree >= 1".into())),
    };
    let zeros = p.coeffs().iter().take_while(|c| c.is_zero()).count();
    let mut roots = vec![Complex::zero(); zeros];
    let q = Polynomial::new(p.coeffs()[zeros..].to_vec());
    let n = deg - zeros;
    if n == 0 {
        return Ok(roots);
    }
    let lead = q.leading();
    let monic = q.scale(lead.inv());
    if n == 1 {
        roots.push(-monic.coeff(0));
        return Ok(roots);
    }

    let mut z = initial_guesses(&monic, n);
    let eps = T::epsilon();
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (pv, dp) = monic.eval_with_derivative(z[k]);
            if pv.is_zero() {
                converged[k] = true;
                continue;
            }
            let ratio = pv / dp;
            let mut s = Complex::zero();
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if !d.is_zero() {
                        s = s + d.inv();
                    }
                }
            }
            let corr = ratio / (Complex::new(T::one(), T::zero()) - ratio * s);
            let corr = if corr.re.is_finite() && corr.im.is_finite() { corr } else { ratio };
            // rounding floor where pv was evaluated, not at the updated point
            let err_scale = monic.abs_eval(z[k]) * eps * cst(4.0);
            z[k] = z[k] - corr;
            if corr.norm() <= eps * cst::<T>(2.0) * z[k].norm() || pv.norm() <= err_scale {
                converged[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }

    for r in z.iter_mut() {
        polish(&monic, r);
    }
    for r in &z {
        let res = monic.eval(*r).norm();
        let bound = monic.abs_eval(*r) * cst::<T>(1e-10).max(T::epsilon() * cst(64.0));
        if res.is_nan() || res > bound {
            return Err(Error::Convergence(format!(
                "polynomial root {} has residual {:e} above {:e}",
                r, res, bound
            )));
        }
    }
    roots.extend(z);
    Ok(roots)
}

fn polish<T: Real>(p: &Polynomial<T>, r: &mut Complex<T>) {
    let mut best = p.eval(*r).norm();
    for _ in 0..4 {
        let (v, dv) = p.eval_with_derivative(*r);
        if dv.is_zero() {
            return;
        }
        let cand = *r - v / dv;
        let res = p.eval(cand).norm();
        if res < best && cand.re.is_finite() && cand.im.is_finite() {
            best = res;
            *r = cand;
        } else {
            return;
        }
    }
}

fn initial_guesses<T: Real>(monic: &Polynomial<T>, n: usize) -> Vec<Complex<T>> {
    // radius from the geometric mean of root moduli, bounded by the Cauchy bound
    let c0 = monic.coeff(0).norm();
    let mut cauchy = T::zero();
    for k in 0..n {
        cauchy = cauchy.max(monic.coeff(k).norm());
    }
    let cauchy = T::one() + cauchy;
    let mut r = if c0 > T::zero() { c0.powf(T::one() / cst(n as f64)) } else { T::one() };
    if r.is_nan() || r <= T::zero() || r > cauchy {
        r = cauchy.min(T::one());
    }
    let centroid = -monic.coeff(n - 1) / cst::<T>(n as f64);
    let tau = cst::<T>(2.0) * T::PI();
    (0..n)
        .map(|k| {
            let th = tau * cst(k as f64) / cst(n as f64) + cst(0.4);
            centroid + Complex::from_polar(r, th)
        })
        .collect()
}

/// Group numerically equal roots: each cluster's mean and its size.
pub fn cluster_roots<T: Real>(roots: &[Complex<T>], rel: T) -> Vec<(Complex<T>, usize)> {
    let mut out: Vec<(Complex<T>, usize, Complex<T>)> = Vec::new();
    for &r in roots {
        let scale = T::one().max(r.norm());
        if let Some(slot) = out.iter_mut().find(|(m, _, _)| (*m - r).norm() <= rel * scale) {
            slot.1 += 1;
            slot.2 = slot.2 + r;
            slot.0 = slot.2 / cst::<T>(slot.1 as f64);
        } else {
            out.push((r, 1, r));
        }
    }
    out.into_iter().map(|(m, k, _)| (m, k)).collect()
}
