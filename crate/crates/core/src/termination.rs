//! Right-hand termination: parameter values for which `c_{N+1} = c_{N+2} = 0`, so
//! the series collapses to a finite sum that solves the equation exactly.
//!
//! `α` is fixed first so that the trailing coefficient multiplying `c_N` vanishes;
//! the accessory parameter `q` is then a root of `c_{N+1}(q)`, which is made a
//! polynomial by clearing the leading coefficients of the recurrence.

use num_complex::Complex;
use num_traits::Zero;

use crate::equations::ConfluentHeun;
use crate::expansion::GammaSeries;
use crate::numerics::{cluster_roots, cst, polynomial_roots, Polynomial, Real};
use crate::recurrence::{build_recurrence, interpolate_on_circle, RecurrenceScheme, SchemeId};
use crate::{Error, Result};

/// Threshold for `|c_{N+1}|`, `|c_{N+2}|` relative to the retained coefficients and
/// for the finite-sum residual.
pub const CERTIFY_TOL: f64 = 1e-8;
/// Grid size of [`verify_finite_sum`].
pub const GRID_POINTS: usize = 200;
/// Sample count for recovering `q`-dependence; enough for the degrees that occur.
const Q_NODES: usize = 8;

/// Certification data for one root `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCertificate<T> {
    pub q: Complex<T>,
    /// `|c_{N+1}| / max_{n≤N} |c_n|`.
    pub c_next: T,
    /// `|c_{N+2}| / max_{n≤N} |c_n|`.
    pub c_after: T,
    /// Finite-sum residual from [`verify_finite_sum`] (`None` if the sum could not be built).
    pub residual: Option<T>,
}

impl<T: Real> RootCertificate<T> {
    pub fn is_certified(&self) -> bool {
        let tol = cst::<T>(CERTIFY_TOL);
        self.c_next <= tol && self.c_after <= tol && self.residual.is_some_and(|r| r <= tol)
    }
}

/// Outcome of a termination search.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminationCandidate<T> {
    pub scheme: SchemeId,
    pub n: usize,
    pub mu: Complex<T>,
    pub alpha: Complex<T>,
    pub certified: Vec<RootCertificate<T>>,
    /// Roots of `c_{N+1}(q)` failing at least one certification test.
    pub uncertified: Vec<RootCertificate<T>>,
}

/// The `α` that annihilates the trailing recurrence coefficient at index `N`.
pub fn rhs_alpha<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>, n: usize, mu: Complex<T>) -> Result<Complex<T>> {
    if eq.variant != scheme.id.variant() {
        return Err(Error::Precondition(format!("scheme {} applies to {}", scheme.id, scheme.id.variant().name())));
    }
    if eq.epsilon.is_zero() {
        return Err(Error::Precondition("ε ≠ 0".into()));
    }
    let nn = mu + cst::<T>(n as f64);
    match scheme.id {
        SchemeId::ScheIOrigin | SchemeId::ScheIZ0 => Ok(eq.epsilon * (nn + eq.gamma + eq.delta)),
        SchemeId::DcheIOrigin | SchemeId::DcheIZ0 => Ok(eq.epsilon * (nn + eq.delta)),
        SchemeId::BcheIIZ0 => {
            let z0 = eq.extra_singularity()?;
            let lhs = eq.delta + eq.epsilon * z0;
            if lhs.norm() > cst::<T>(1e-12) * eq.scale() {
                return Err(Error::Precondition("δ + εz₀ = 0".into()));
            }
            Ok(eq.epsilon * (nn + eq.gamma))
        }
        id => Err(Error::UnsupportedScheme(format!(
            "{}: the trailing coefficient does not depend on n, so the series cannot terminate",
            id
        ))),
    }
}

/// Each recurrence coefficient function as polynomials in `q`, one per power of `x`.
fn q_dependence<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>) -> Result<(Vec<Vec<Polynomial<T>>>, usize)> {
    let r = eq.scale();
    let phase = cst::<T>(0.1);
    let mut rels = Vec::with_capacity(Q_NODES);
    for m in 0..Q_NODES {
        let q = Complex::from_polar(r, T::TAU() * cst::<T>(m as f64 / Q_NODES as f64) + phase);
        rels.push(build_recurrence(&eq.with_q(q), scheme)?);
    }
    let lead = rels[0].lead_index();
    if rels.iter().any(|x| x.lead_index() != lead) {
        return Err(Error::Degenerate("leading term changes with q".into()));
    }
    let k = rels[0].k();
    let mut out = Vec::with_capacity(k - lead);
    for j in lead..k {
        let deg = rels.iter().map(|x| x.polynomial(j).coeffs().len()).max().unwrap_or(0);
        let per_power = (0..deg)
            .map(|pw| {
                let vals: Vec<Complex<T>> = rels.iter().map(|x| x.polynomial(j).coeff(pw)).collect();
                interpolate_on_circle(&vals, r, phase)
            })
            .collect();
        out.push(per_power);
    }
    Ok((out, lead))
}

/// Drop leading coefficients that are negligible on the circle `|q| = r`, the
/// scale at which the `q`-dependence was sampled.
fn trim_on<T: Real>(p: Polynomial<T>, rel: T, r: T) -> Polynomial<T> {
    let peak = p.coeffs().iter().enumerate().fold(T::zero(), |m, (k, c)| m.max(c.norm() * r.powi(k as i32)));
    let mut c = p.coeffs().to_vec();
    while c.last().is_some_and(|l| l.norm() * r.powi(c.len() as i32 - 1) <= rel * peak) {
        c.pop();
    }
    Polynomial::new(c)
}

/// `F_j(x)` as a polynomial in `q` at fixed `x`.
fn at_x<T: Real>(per_power: &[Polynomial<T>], x: Complex<T>) -> Polynomial<T> {
    let mut acc = Polynomial::zero();
    let mut xp = Complex::new(T::one(), T::zero());
    for p in per_power {
        acc = &acc + &p.scale(xp);
        xp = xp * x;
    }
    acc
}

/// Cleared coefficients `(d_n, L_1⋯L_n)` for `n = 0..=n_max`, with `L_k` the leading
/// coefficient at index `k` and `c_n = d_n / (L_1⋯L_n)`, all as polynomials in `q`.
///
/// `d_n = −Σ_j F_j(n−j+μ) d_{n−j} L_{n−j+1}⋯L_{n−1}`.  The `q` of `eq` is ignored.
pub fn coefficients_as_q_polynomials<T: Real>(
    eq: &ConfluentHeun<T>,
    scheme: &RecurrenceScheme<T>,
    mu: Complex<T>,
    n_max: usize,
) -> Result<Vec<(Polynomial<T>, Polynomial<T>)>> {
    let (f, _) = q_dependence(eq, scheme)?;
    let tol = cst::<T>(1e-12);
    let x = |n: usize| mu + cst::<T>(n as f64);
    let r = eq.scale();
    let lead: Vec<Polynomial<T>> = (0..=n_max).map(|n| trim_on(at_x(&f[0], x(n)), tol, r)).collect();
    let mut d: Vec<Polynomial<T>> = vec![Polynomial::one()];
    let mut clear = vec![Polynomial::one()];
    for n in 1..=n_max {
        if lead[n].is_zero() {
            return Err(Error::DegenerateIndex { n });
        }
        let mut acc = Polynomial::zero();
        for (j, fj) in f.iter().enumerate().skip(1).take(n) {
            let m = n - j;
            let mut term = &at_x(fj, x(m)) * &d[m];
            for l in &lead[m + 1..n] {
                term = &term * l;
            }
            acc = &acc + &term;
        }
        d.push(trim_on(-acc, tol, r));
        clear.push(&clear[n - 1] * &lead[n]);
    }
    Ok(d.into_iter().zip(clear).collect())
}

/// `c_{N+1}` as a function of `q`, straight from the recurrence.
fn trailing<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>, mu: Complex<T>, n: usize, q: Complex<T>) -> Option<Complex<T>> {
    let c = build_recurrence(&eq.with_q(q), scheme).ok()?.generate(mu, n + 1).ok()?;
    Some(c.get(n as i64 + 1)).filter(|v| v.re.is_finite() && v.im.is_finite())
}

/// Simultaneous (Aberth) refinement of all roots of the deflated cleared polynomial,
/// evaluated as `c_{N+1}(q) · L(q) / R(q)` with `c_{N+1}` straight from the recurrence,
/// `L` the clearing product and `R` the factors removed by deflation.  Starts from the
/// roots of the polynomial itself and keeps a start whose evaluation fails.
fn refine_all<T: Real>(
    eq: &ConfluentHeun<T>,
    scheme: &RecurrenceScheme<T>,
    mu: Complex<T>,
    n: usize,
    clear: &Polynomial<T>,
    removed: &Polynomial<T>,
    mut z: Vec<Complex<T>>,
) -> Vec<Complex<T>> {
    let f = |q: Complex<T>| trailing(eq, scheme, mu, n, q).map(|c| c * clear.eval(q) / removed.eval(q));
    let mut done = vec![false; z.len()];
    for _ in 0..100 {
        let mut all = true;
        for k in 0..z.len() {
            if done[k] {
                continue;
            }
            let q = z[k];
            let h = cst::<T>(1e-6) * (T::one() + q.norm());
            let (Some(v), Some(up), Some(dn)) = (f(q), f(q + h), f(q - h)) else {
                done[k] = true;
                continue;
            };
            if v.is_zero() {
                done[k] = true;
                continue;
            }
            let ratio = v * cst::<T>(2.0) * h / (up - dn);
            let sum = z.iter().enumerate().filter(|&(j, _)| j != k).fold(Complex::zero(), |acc, (_, &w)| acc + (q - w).inv());
            let w = ratio / (Complex::new(T::one(), T::zero()) - ratio * sum);
            if !(w.re.is_finite() && w.im.is_finite()) {
                done[k] = true;
                continue;
            }
            z[k] = q - w;
            if w.norm() <= cst::<T>(1e-14) * (T::one() + z[k].norm()) {
                done[k] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z
}

fn certify<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>, mu: Complex<T>, n: usize, q: Complex<T>) -> Option<RootCertificate<T>> {
    let eqq = eq.with_q(q);
    let rel = build_recurrence(&eqq, scheme).ok()?;
    let c = rel.generate(mu, n + 2).ok()?;
    let peak = c.coeffs()[..=n].iter().fold(T::zero(), |m, v| m.max(v.norm()));
    let c_next = c.coeffs()[n + 1].norm() / peak;
    let c_after = c.coeffs()[n + 2].norm() / peak;
    let residual = GammaSeries::from_coefficients(&eqq, scheme, c.truncated(n))
        .and_then(|mut s| {
            s.fix_constant()?;
            verify_finite_sum(&s)
        })
        .ok();
    Some(RootCertificate { q, c_next, c_after, residual })
}

/// Divide out of `d` the factors it shares with the clearing product: they are
/// artefacts of clearing, and rounding turns them into clusters of spurious roots.
fn deflate_clearing<T: Real>(mut d: Polynomial<T>, clear: &Polynomial<T>) -> Result<(Polynomial<T>, Polynomial<T>)> {
    let mut removed = Polynomial::one();
    if clear.degree().unwrap_or(0) == 0 {
        return Ok((d, removed));
    }
    let roots = polynomial_roots(clear)?;
    for (r, mult) in cluster_roots(&roots, cst(1e-6)) {
        for _ in 0..mult {
            let Some(deg) = d.degree().filter(|&k| k > 0) else { break };
            let (quot, rem) = d.div_linear(r);
            let scale = d.max_abs() * T::one().max(r.norm()).powi(deg as i32);
            if rem.norm() > cst::<T>(1e-8) * scale {
                break;
            }
            d = quot;
            removed = &removed * &Polynomial::linear_root(r);
        }
    }
    Ok((d, removed))
}

/// Roots `q` of `c_{N+1}(q)` for the `α` already in `eq`, each certified by the two
/// trailing coefficients and the finite-sum residual.
pub fn find_terminating_q<T: Real>(
    eq: &ConfluentHeun<T>,
    scheme: &RecurrenceScheme<T>,
    n: usize,
    mu: Complex<T>,
) -> Result<TerminationCandidate<T>> {
    let want = rhs_alpha(eq, scheme, n, mu)?;
    if (want - eq.alpha).norm() > cst::<T>(1e-10) * eq.scale() {
        return Err(Error::Precondition(format!("α = {} from the termination condition", want)));
    }
    let polys = coefficients_as_q_polynomials(eq, scheme, mu, n + 1)?;
    let (d, clear) = &polys[n + 1];
    let d = trim_on(d.clone(), cst(1e-10), eq.scale());
    match d.degree() {
        None => return Err(Error::Degenerate(format!("c_{} vanishes for every q", n + 1))),
        Some(0) => return Err(Error::NoRoots(format!("c_{} is a nonzero constant in q", n + 1))),
        _ => {}
    }
    let mut cand = TerminationCandidate { scheme: scheme.id, n, mu, alpha: eq.alpha, certified: Vec::new(), uncertified: Vec::new() };
    let scale = eq.scale();
    let (d, removed) = deflate_clearing(d, clear)?;
    if d.degree().unwrap_or(0) == 0 {
        return Ok(cand);
    }
    let roots = refine_all(eq, scheme, mu, n, clear, &removed, polynomial_roots(&d)?);
    let mut seen: Vec<Complex<T>> = Vec::new();
    for q in roots {
        if seen.iter().any(|s| (*s - q).norm() <= cst::<T>(1e-8) * scale) {
            continue;
        }
        seen.push(q);
        match certify(eq, scheme, mu, n, q) {
            Some(c) if c.is_certified() => cand.certified.push(c),
            Some(c) => cand.uncertified.push(c),
            None => {}
        }
    }
    Ok(cand)
}

/// Largest normalized residual `|P u'' + B u' + C u| / (|P u''| + |B u'| + |C u|)` of the
/// series on a polar grid of [`GRID_POINTS`] points filling the half-radius disk
/// (`|z − z₁| ≤ 2` when the radius is infinite).
pub fn verify_finite_sum<T: Real>(series: &GammaSeries<T>) -> Result<T> {
    let rad = series.convergence_radius();
    let r = if rad.is_finite() { rad / cst(2.0) } else { cst(2.0) };
    let eq = series.equation();
    let (rings, spokes) = (10, GRID_POINTS / 10);
    let mut worst = T::zero();
    for i in 0..rings {
        for k in 0..spokes {
            let rho = r * cst::<T>((i as f64 + 0.5) / rings as f64);
            let th = T::TAU() * cst::<T>((k as f64 + 0.25 * (i % 4) as f64) / spokes as f64);
            let z = series.center() + Complex::from_polar(rho, th);
            let e = series.evaluate(z)?;
            let u2 = series.second_derivative(z)?;
            let (res, scale) = eq.residual(z, e.u, e.u_prime, u2);
            if scale > T::zero() {
                worst = worst.max(res.norm() / scale);
            }
        }
    }
    Ok(worst)
}
