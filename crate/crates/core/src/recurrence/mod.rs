//! Frobenius coefficient recurrences for every catalogued expansion scheme.
//!
//! Each scheme's relation reads `Σ_j F_j(n − j + μ) c_{n−j} = 0`, where the
//! `F_j` are polynomials of degree at most two in `x = n + μ`.  Terms are named
//! `S, R, Q, P` (four terms), `T, S, R, Q, P` (five) and `W, T, S, R, Q, P`
//! (six), leading term first.

mod reductions;
mod scheme;

use num_complex::Complex;
use num_traits::Zero;

use crate::equations::{ConfluentHeun, Variant};
use crate::numerics::{cst, near_integer, polynomial_roots, Polynomial, Real};
use crate::{Error, Result};

pub(crate) use reductions::interpolate_on_circle;
pub use reductions::{detect_reductions, LambdaChoice, ReductionReport};
pub use scheme::{Center, ExpansionType, RecurrenceScheme, SchemeId};

/// Coefficients above this modulus trigger a rescale of the whole sequence.
const OVERFLOW_GUARD: f64 = 1e150;
/// A coefficient function counts as identically zero below this fraction of the relation scale.
pub const VANISHING_TOL: f64 = 1e-13;

/// A linear recurrence for the coefficients `c_n` of `v = Σ c_n (z − z₁)^{n+μ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRelation<T> {
    scheme: RecurrenceScheme<T>,
    lambda: Option<Complex<T>>,
    center: Complex<T>,
    polys: Vec<Polynomial<T>>,
    lead: usize,
    scale: T,
}

fn names(k: usize) -> &'static [&'static str] {
    match k {
        4 => &["S", "R", "Q", "P"],
        5 => &["T", "S", "R", "Q", "P"],
        _ => &["W", "T", "S", "R", "Q", "P"],
    }
}

fn p<T: Real>(c: &[Complex<T>]) -> Polynomial<T> {
    Polynomial::new(c.to_vec())
}

fn table<T: Real>(id: SchemeId, eq: &ConfluentHeun<T>, lam: Complex<T>, z0: Complex<T>) -> Vec<Polynomial<T>> {
    let (g, d, e, a, q) = (eq.gamma, eq.delta, eq.epsilon, eq.alpha, eq.q);
    let o = Complex::zero();
    let one = Complex::new(T::one(), T::zero());
    let two = Complex::new(cst::<T>(2.0), T::zero());
    let s = g + d * z0 + e * z0 * z0;
    let l = lam;
    match id {
        SchemeId::ScheIOrigin => vec![
            p(&[o, q * g, q]),
            p(&[q * q + a * g - q * (g + d + g * e), a * (one - g) - q * (one + g + d + e), -(q + a)]),
            p(&[-two * q * a + (q + a) * g * e + q * d * e, a * (g + d) + (q + a) * e, a]),
            p(&[a * (a - e * (g + d)), -a * e]),
        ],
        SchemeId::ScheIZ0 => {
            let zz = z0 * (z0 - one);
            let h = g - z0 * (g + d);
            vec![
                p(&[o, -zz * two, zz]),
                p(&[h, one - z0 * two - g + z0 * (g + d) - zz * e, z0 * two - one]),
                p(&[h * e, g + d + (one - z0 * two) * e, one]),
                p(&[a - e * (g + d), -e]),
            ]
        }
        SchemeId::DcheIOrigin => vec![
            p(&[o, -q * g]),
            p(&[q * (q - d + g * e) - a * g, a * g - q - q * d, -q]),
            p(&[e * (q * d - a * g) - two * q * a, a * d + q * e, a]),
            p(&[a * (a - e * d), -a * e]),
        ],
        SchemeId::DcheIZ0 => vec![
            p(&[o, -z0 * z0 * two, z0 * z0]),
            p(&[-(g + z0 * d), g + z0 * (d - two) - z0 * z0 * e, z0 * two]),
            p(&[-(g + z0 * d) * e, d - z0 * e * two, one]),
            p(&[a - e * d, -e]),
        ],
        SchemeId::BcheIOrigin => vec![
            p(&[o, -q * g, -q]),
            p(&[q * q - a * g - q * (d - l - g * l), a * g - a + q * l * two - q * d, a]),
            p(&[-two * q * (a + e) + l * (q * d - a * g - q * l), a * d - q * e - two * a * l]),
            p(&[a * a + q * e * l + a * l * (l - d) + a * e, a * e]),
            p(&[-a * l * e]),
        ],
        SchemeId::BcheIZ0 => vec![
            p(&[o, -z0 * two, z0]),
            p(&[l * z0 - s, g - one + z0 * (d + z0 * e - l * two), one]),
            p(&[l * l * z0 - l * s, d + z0 * e * two - l * two]),
            p(&[a + e - l * (d + z0 * e * two - l), e]),
            p(&[-l * e]),
        ],
        SchemeId::BcheIIOrigin => vec![
            p(&[o, -q * g, -q]),
            p(&[q * q - a * g - q * d, a * g - a - q * d, a]),
            p(&[-two * q * a + q * g * e, a * d + q * e]),
            p(&[a * a + q * d * e - a * e * g, -a * e]),
            p(&[-a * d * e]),
        ],
        SchemeId::BcheIIZ0 => vec![
            p(&[o, -z0 * two, z0]),
            p(&[-s, s - one, one]),
            p(&[o, d]),
            p(&[a - e * s, -e]),
            p(&[-e * (d + e * z0)]),
        ],
        SchemeId::TcheIZ0 => {
            let k = d + e * z0 * two;
            vec![
                p(&[o, -one * two, one]),
                p(&[l - s, s - l * two]),
                p(&[(l - s) * l, k]),
                p(&[a + e - k * l, e]),
                p(&[-e * l]),
            ]
        }
        SchemeId::TcheIIqZ0 => {
            let k = d + e * z0 * two;
            vec![
                p(&[o, -one * two, one]),
                p(&[-s, s]),
                p(&[o, k - l * two]),
                p(&[a + e - s * l, e]),
                p(&[-(k - l) * l]),
                p(&[-e * l]),
            ]
        }
        SchemeId::TcheIIcZ0 => {
            let k = d + e * z0 * two;
            vec![
                p(&[o, -one * two, one]),
                p(&[-s, s]),
                p(&[o, k]),
                p(&[a, -e]),
                p(&[-e * s]),
                p(&[-e * k]),
            ]
        }
    }
}

/// Build the recurrence of `scheme` for `eq`, checking the scheme's preconditions.
pub fn build_recurrence<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>) -> Result<RecurrenceRelation<T>> {
    scheme.check(eq)?;
    let center = scheme.center_point(eq)?;
    let z0 = if eq.alpha.is_zero() { Complex::zero() } else { eq.q / eq.alpha };
    let lambda = scheme.lambda_for(eq)?;
    let polys = table(scheme.id, eq, lambda.unwrap_or_else(Complex::zero), z0);
    let scale = polys.iter().fold(T::zero(), |m, p| m.max(p.max_abs()));
    if scale == T::zero() {
        return Err(Error::Degenerate("every coefficient function vanishes".into()));
    }
    let lead = polys
        .iter()
        .position(|p| !p.is_negligible(cst(VANISHING_TOL), scale))
        .unwrap_or(0);
    Ok(RecurrenceRelation { scheme: *scheme, lambda, center, polys, lead, scale })
}

impl<T: Real> RecurrenceRelation<T> {
    pub fn scheme(&self) -> &RecurrenceScheme<T> {
        &self.scheme
    }

    /// The weight parameter in effect (`None` for schemes without a free λ).
    pub fn lambda(&self) -> Option<Complex<T>> {
        self.lambda
    }

    /// Expansion center `z₁`.
    pub fn center(&self) -> Complex<T> {
        self.center
    }

    /// Number of terms as catalogued (4, 5 or 6).
    pub fn k(&self) -> usize {
        self.polys.len()
    }

    pub fn term_name(&self, j: usize) -> &'static str {
        names(self.k())[j]
    }

    pub fn term_names(&self) -> &'static [&'static str] {
        names(self.k())
    }

    /// `F_j` as a polynomial in `x = n + μ`.
    pub fn polynomial(&self, j: usize) -> &Polynomial<T> {
        &self.polys[j]
    }

    /// Coefficient `F_j(n + μ)` multiplying `c_n` in the relation for `c_{n+j}`.
    pub fn coeff(&self, j: usize, n: i64, mu: Complex<T>) -> Complex<T> {
        self.polys[j].eval(mu + cst::<T>(n as f64))
    }

    /// Largest coefficient modulus over all `F_j`.
    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn is_vanishing(&self, j: usize) -> bool {
        self.polys[j].is_negligible(cst(VANISHING_TOL), self.scale)
    }

    /// Index of the first term not identically zero; its polynomial is the indicial one.
    pub fn lead_index(&self) -> usize {
        self.lead
    }

    /// The relation with identically vanishing leading terms dropped.
    fn effective(&self) -> &[Polynomial<T>] {
        &self.polys[self.lead..]
    }

    pub fn indicial_polynomial(&self) -> &Polynomial<T> {
        &self.polys[self.lead]
    }

    /// Roots of the indicial polynomial, with the resonant and repeated ones set aside.
    pub fn exponents(&self) -> Result<ExponentSet<T>> {
        let ind = self.indicial_polynomial().trimmed(cst(VANISHING_TOL));
        let mut roots = match ind.degree() {
            None | Some(0) => {
                return Err(Error::Degenerate("indicial polynomial has no roots".into()));
            }
            _ => polynomial_roots(&ind)?,
        };
        roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap_or(std::cmp::Ordering::Equal));
        let tol = cst::<T>(1e-10);
        let mut set = ExponentSet { admissible: Vec::new(), excluded: Vec::new() };
        for (i, &r) in roots.iter().enumerate() {
            let mut reason = None;
            for &other in &roots[..i] {
                let diff = other - r;
                if diff.norm() <= tol * (T::one() + r.norm()) {
                    reason = Some(Exclusion::Repeated);
                    break;
                }
                if let Some(k) = near_integer(diff, tol * (T::one() + r.norm())).filter(|&k| k > 0) {
                    reason = Some(Exclusion::Resonant { index: k as usize });
                    break;
                }
            }
            match reason {
                Some(x) => set.excluded.push((r, x)),
                None => set.admissible.push(r),
            }
        }
        Ok(set)
    }

    /// Coefficients `c_0 = 1, …, c_N` for exponent `μ`.
    pub fn generate(&self, mu: Complex<T>, n_max: usize) -> Result<CoefficientSequence<T>> {
        self.run(mu, n_max, None)
    }

    /// Like [`generate`](Self::generate), but at an index where the leading coefficient
    /// vanishes and the relation is still consistent, `c_n` is set to `free`.
    pub fn generate_resonant(&self, mu: Complex<T>, n_max: usize, free: Complex<T>) -> Result<CoefficientSequence<T>> {
        self.run(mu, n_max, Some(free))
    }

    fn run(&self, mu: Complex<T>, n_max: usize, free: Option<Complex<T>>) -> Result<CoefficientSequence<T>> {
        let g = self.effective();
        let g0 = &g[0];
        let ind = g0.eval(mu);
        if ind.norm() > cst::<T>(1e-9) * g0.abs_eval(mu).max(self.scale) {
            return Err(Error::Precondition(format!("μ = {} is a root of the indicial polynomial", mu)));
        }
        let mut c = Vec::with_capacity(n_max + 1);
        c.push(Complex::new(T::one(), T::zero()));
        let mut ln_scale = T::zero();
        let guard = cst::<T>(OVERFLOW_GUARD);
        for n in 1..=n_max {
            let mut sum: Complex<T> = Complex::zero();
            let mut abs = T::zero();
            for (j, f) in g.iter().enumerate().skip(1).take(n) {
                let m = n - j;
                let t = f.eval(mu + cst::<T>(m as f64)) * c[m];
                sum = sum + t;
                abs = abs + t.norm();
            }
            let x = mu + cst::<T>(n as f64);
            let den = g0.eval(x);
            let cn = if den.norm() <= cst::<T>(1e-12) * g0.abs_eval(x) {
                match free {
                    Some(v) if sum.norm() <= cst::<T>(1e-10) * abs.max(T::min_positive_value()) => v,
                    _ => return Err(Error::DegenerateIndex { n }),
                }
            } else {
                -sum / den
            };
            c.push(cn);
            if cn.norm() > guard {
                for v in c.iter_mut() {
                    *v = *v / guard;
                }
                ln_scale = ln_scale + guard.ln();
            }
        }
        Ok(CoefficientSequence { mu, coeffs: c, ln_scale, scheme: self.scheme.id })
    }
}

/// Why an indicial root is not offered as an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exclusion {
    /// A larger root exceeds this one by `index`, where the leading coefficient vanishes.
    Resonant { index: usize },
    /// Coincides with a root already listed.
    Repeated,
}

/// Indicial roots split into usable exponents and excluded ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSet<T> {
    /// Decreasing real part.
    pub admissible: Vec<Complex<T>>,
    pub excluded: Vec<(Complex<T>, Exclusion)>,
}

/// Admissible exponents of `scheme` for `eq`.
pub fn admissible_exponents<T: Real>(eq: &ConfluentHeun<T>, scheme: &RecurrenceScheme<T>) -> Result<ExponentSet<T>> {
    build_recurrence(eq, scheme)?.exponents()
}

/// Run the recurrence from `c_0 = 1`; the caller may retry with another exponent on
/// [`Error::DegenerateIndex`].
pub fn generate_coefficients<T: Real>(
    rel: &RecurrenceRelation<T>,
    mu: Complex<T>,
    n_max: usize,
) -> Result<CoefficientSequence<T>> {
    rel.generate(mu, n_max)
}

/// Exponent `μ` and coefficients of a Frobenius series.
///
/// The true coefficients are `coeffs()[n] · e^{ln_scale}`; `ln_scale` is nonzero
/// only after an overflow rescale.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence<T> {
    mu: Complex<T>,
    coeffs: Vec<Complex<T>>,
    ln_scale: T,
    scheme: SchemeId,
}

impl<T: Real> CoefficientSequence<T> {
    pub fn new(mu: Complex<T>, coeffs: Vec<Complex<T>>, scheme: SchemeId) -> Self {
        CoefficientSequence { mu, coeffs, ln_scale: T::zero(), scheme }
    }

    pub fn mu(&self) -> Complex<T> {
        self.mu
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn ln_scale(&self) -> T {
        self.ln_scale
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    /// Index of the last coefficient.
    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_n` with the rescale applied (zero for negative `n`).
    pub fn get(&self, n: i64) -> Complex<T> {
        if n < 0 || n as usize >= self.coeffs.len() {
            return Complex::zero();
        }
        self.coeffs[n as usize] * self.ln_scale.exp()
    }

    /// Keep `c_0..=c_n`.
    pub fn truncated(&self, n: usize) -> Self {
        let mut s = self.clone();
        s.coeffs.truncate(n + 1);
        s
    }
}

/// The two recurrences with a closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoTermCase<T> {
    /// Bi-confluent, quadratic weight at the origin, `δ = q = 0`.  `mu` is the
    /// exponent of `v` (`1` or `−γ`).  Indexed with `c_0 = 0, c_1 = 1`, so entry
    /// `n` equals the generated `c_{n−1}`.
    BiconfluentQuadratic { mu: Complex<T> },
    /// Tri-confluent, cubic weight, `γ = εq²/α²`, `δ = −2εq/α`, with `μ = 0`,
    /// `c_0 = 1`, `c_1 = c_2 = 0`.
    TriconfluentCubic,
}

/// Explicit coefficient `c_n` of a two-term relation.
pub fn two_term_closed_form<T: Real>(case: TwoTermCase<T>, eq: &ConfluentHeun<T>, n: usize) -> Result<Complex<T>> {
    let s = eq.scale();
    let small = |x: Complex<T>, sc: T| x.norm() <= cst::<T>(1e-12) * sc;
    let one = Complex::new(T::one(), T::zero());
    match case {
        TwoTermCase::BiconfluentQuadratic { mu } => {
            if eq.variant != Variant::Bche || !small(eq.q, s) || !small(eq.delta, s) {
                return Err(Error::Precondition("bi-confluent with q = δ = 0".into()));
            }
            if eq.alpha.is_zero() || eq.epsilon.is_zero() {
                return Err(Error::Precondition("α ≠ 0 and ε ≠ 0".into()));
            }
            if n.is_multiple_of(2) {
                return Ok(Complex::zero());
            }
            let k = (n - 1) / 2;
            let mp = mu - one;
            let half = cst::<T>(0.5);
            let mut a = one;
            for i in 0..k {
                let fi = cst::<T>(i as f64);
                let num = (eq.epsilon * half) * ((one + eq.gamma + mp - eq.alpha / eq.epsilon) * half + fi);
                let den = (one + mp * half + fi) * (one + (one + eq.gamma + mp) * half + fi);
                a = a * num / den;
            }
            Ok(a)
        }
        TwoTermCase::TriconfluentCubic => {
            if eq.variant != Variant::Tche || eq.alpha.is_zero() || eq.epsilon.is_zero() {
                return Err(Error::Precondition("tri-confluent with α ≠ 0 and ε ≠ 0".into()));
            }
            let z0 = eq.q / eq.alpha;
            if !small(eq.gamma - eq.epsilon * z0 * z0, s * s * s) || !small(eq.delta + eq.epsilon * z0 * cst::<T>(2.0), s * s) {
                return Err(Error::Precondition("γ = εq²/α² and δ = −2εq/α".into()));
            }
            if !n.is_multiple_of(3) {
                return Ok(Complex::zero());
            }
            let third = cst::<T>(1.0 / 3.0);
            let mut c = one;
            for i in 0..n / 3 {
                let fi = cst::<T>(i as f64);
                let num = eq.epsilon * third * (-eq.alpha / (eq.epsilon * cst::<T>(3.0)) + fi);
                let den = (fi + third) * (fi + T::one());
                c = c * num / den;
            }
            Ok(c)
        }
    }
}
