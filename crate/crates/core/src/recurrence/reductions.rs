use num_complex::Complex;
use num_traits::Zero;

use super::{build_recurrence, RecurrenceRelation, RecurrenceScheme, SchemeId};
use crate::equations::ConfluentHeun;
use crate::numerics::{cst, polynomial_roots, Polynomial, Real};
use crate::Result;

/// Which coefficient functions vanish identically and what is left of the relation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport<T> {
    pub scheme: SchemeId,
    /// λ in effect, for schemes with a free weight constant.
    pub lambda: Option<Complex<T>>,
    /// Catalogued term count.
    pub terms: usize,
    pub vanishing: Vec<&'static str>,
    pub effective_terms: usize,
    /// Surviving terms have consecutive indices.
    pub successive: bool,
    /// For free-λ schemes: values of λ that make some term vanish.
    pub lambda_choices: Vec<LambdaChoice<T>>,
}

/// A λ that annihilates at least one term, and the relation it leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaChoice<T> {
    pub lambda: Complex<T>,
    /// Terms that vanish at this λ but not at every λ.
    pub forces: Vec<&'static str>,
    pub vanishing: Vec<&'static str>,
    pub effective_terms: usize,
    pub successive: bool,
}

fn summary<T: Real>(rel: &RecurrenceRelation<T>) -> (Vec<&'static str>, usize, bool) {
    let k = rel.k();
    let keep: Vec<usize> = (0..k).filter(|&j| !rel.is_vanishing(j)).collect();
    let vanishing = (0..k).filter(|&j| rel.is_vanishing(j)).map(|j| rel.term_name(j)).collect();
    let successive = keep.windows(2).all(|w| w[1] == w[0] + 1);
    (vanishing, keep.len(), successive)
}

/// Each term's `x`-coefficients as polynomials in λ, by interpolation on a circle.
fn lambda_dependence<T: Real>(eq: &ConfluentHeun<T>, id: SchemeId) -> Result<Vec<Vec<Polynomial<T>>>> {
    const NODES: usize = 5;
    let radius = eq.scale();
    let mut samples: Vec<RecurrenceRelation<T>> = Vec::with_capacity(NODES);
    for m in 0..NODES {
        let w = Complex::from_polar(radius, T::TAU() * cst::<T>(m as f64 / NODES as f64) + cst(0.1));
        samples.push(build_recurrence(eq, &RecurrenceScheme::with_lambda(id, w))?);
    }
    let k = samples[0].k();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let deg = (0..NODES).map(|m| samples[m].polynomial(j).coeffs().len()).max().unwrap_or(0);
        let mut per_power = Vec::with_capacity(deg);
        for pw in 0..deg {
            let vals: Vec<Complex<T>> = samples.iter().map(|s| s.polynomial(j).coeff(pw)).collect();
            per_power.push(interpolate_on_circle(&vals, radius, cst(0.1)));
        }
        out.push(per_power);
    }
    Ok(out)
}

/// Polynomial of degree `< vals.len()` through `vals[m]` at `r e^{i(2πm/K + θ)}`.
pub(crate) fn interpolate_on_circle<T: Real>(vals: &[Complex<T>], r: T, theta: T) -> Polynomial<T> {
    let k = vals.len();
    let fk = cst::<T>(k as f64);
    let peak = vals.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    let mut coeffs = Vec::with_capacity(k);
    for d in 0..k {
        let mut acc = Complex::zero();
        for (m, &v) in vals.iter().enumerate() {
            let ang = -(T::TAU() * cst::<T>((m * d) as f64) / fk + theta * cst::<T>(d as f64));
            acc = acc + v * Complex::from_polar(T::one(), ang);
        }
        let c = acc / (fk * r.powi(d as i32));
        let mag = c.norm() * r.powi(d as i32);
        coeffs.push(if mag <= cst::<T>(1e-12) * peak { Complex::zero() } else { c });
    }
    Polynomial::new(coeffs)
}

/// Identically vanishing coefficient functions, the effective term count and,
/// for schemes with a free λ, the λ values that shorten the relation.
pub fn detect_reductions<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>) -> Result<ReductionReport<T>> {
    let rel = build_recurrence(eq, scheme)?;
    let (vanishing, effective_terms, successive) = summary(&rel);
    let mut report = ReductionReport {
        scheme: scheme.id,
        lambda: rel.lambda(),
        terms: rel.k(),
        vanishing,
        effective_terms,
        successive,
        lambda_choices: Vec::new(),
    };
    if !scheme.id.has_free_lambda() {
        return Ok(report);
    }
    let dep = lambda_dependence(eq, scheme.id)?;
    let peak = dep.iter().flatten().fold(T::zero(), |m, p| m.max(p.max_abs()));
    let radius = eq.scale();
    let mut found: Vec<(Complex<T>, Vec<&'static str>)> = Vec::new();
    for (j, powers) in dep.iter().enumerate() {
        let live: Vec<&Polynomial<T>> =
            powers.iter().filter(|p| !p.is_negligible(cst(super::VANISHING_TOL), peak)).collect();
        if live.is_empty() || live.iter().any(|p| p.degree() == Some(0)) {
            continue;
        }
        let roots = polynomial_roots(live[0])?;
        for lam in roots {
            if lam.norm() <= cst::<T>(1e-12) * radius {
                continue;
            }
            if !live.iter().all(|p| p.eval(lam).norm() <= cst::<T>(1e-10) * p.abs_eval(lam)) {
                continue;
            }
            let name = rel.term_name(j);
            match found.iter_mut().find(|(l, _)| (*l - lam).norm() <= cst::<T>(1e-10) * radius) {
                Some((_, names)) => {
                    if !names.contains(&name) {
                        names.push(name);
                    }
                }
                None => found.push((lam, vec![name])),
            }
        }
    }
    for (lam, forces) in found {
        let r = build_recurrence(eq, &RecurrenceScheme::with_lambda(scheme.id, lam))?;
        let (vanishing, effective_terms, successive) = summary(&r);
        report.lambda_choices.push(LambdaChoice { lambda: lam, forces, vanishing, effective_terms, successive });
    }
    Ok(report)
}
