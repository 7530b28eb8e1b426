//! Dormand–Prince 5(4) along piecewise-linear paths in the complex plane.

use num_complex::Complex;

use super::SolutionSample;
use crate::equations::{ConfluentHeun, RationalOperator};
use crate::numerics::{cst, is_finite, Real};
use crate::{Error, Result};

/// Integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Take this many equal steps per segment instead of adapting.
    pub fixed_steps: Option<usize>,
    /// Segments may not pass closer than this to a singular point.
    pub min_distance: T,
    pub max_steps: usize,
}

impl<T: Real> Default for RkOptions<T> {
    fn default() -> Self {
        RkOptions {
            rtol: cst(1e-12),
            atol: cst(1e-14),
            fixed_steps: None,
            min_distance: cst(1e-3),
            max_steps: 200_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State<T> = [Complex<T>; 2];

fn axpy<T: Real>(y: &State<T>, ks: &[State<T>], w: &[f64], h: T) -> State<T> {
    let mut out = *y;
    for (k, &wi) in ks.iter().zip(w) {
        if wi != 0.0 {
            let f = h * cst::<T>(wi);
            out[0] = out[0] + k[0] * f;
            out[1] = out[1] + k[1] * f;
        }
    }
    out
}

fn distance_to_segment<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == T::zero() {
        return (p - a).norm();
    }
    let t = ((p - a) * d.conj()).re / len2;
    let t = t.max(T::zero()).min(T::one());
    (p - (a + d * t)).norm()
}

struct Segment<'a, T> {
    op: &'a RationalOperator<T>,
    z0: Complex<T>,
    dz: Complex<T>,
}

impl<T: Real> Segment<'_, T> {
    /// `d(u, u')/dτ` at `z = z0 + τ dz`.
    fn rhs(&self, tau: T, y: &State<T>) -> State<T> {
        let z = self.z0 + self.dz * tau;
        [y[1] * self.dz, self.op.second_derivative(z, y[0], y[1]) * self.dz]
    }

    fn stages(&self, tau: T, y: &State<T>, h: T, k1: State<T>) -> [State<T>; 7] {
        let mut k = [k1; 7];
        for s in 1..7 {
            let ys = axpy(y, &k[..s], &A[s][..s], h);
            k[s] = self.rhs(tau + h * cst::<T>(C[s]), &ys);
        }
        k
    }
}

/// Integrate `A u'' + B u' + C u = 0` from `start` along the waypoints of `path`,
/// returning a sample at each waypoint (the first is `start`).
pub fn integrate_operator<T: Real>(
    op: &RationalOperator<T>,
    start: SolutionSample<T>,
    path: &[Complex<T>],
    opts: &RkOptions<T>,
) -> Result<Vec<SolutionSample<T>>> {
    let first = *path.first().ok_or_else(|| Error::Precondition("path has at least one waypoint".into()))?;
    if (first - start.z).norm() > cst::<T>(1e-14) * (T::one() + first.norm()) {
        return Err(Error::Precondition("start.z is the first waypoint".into()));
    }
    let sing = op.singular_points()?;
    for w in path.windows(2) {
        for &s in &sing {
            if distance_to_segment(s, w[0], w[1]) < opts.min_distance {
                return Err(Error::SingularPath(format!("{}", s)));
            }
        }
    }
    let mut out = Vec::with_capacity(path.len());
    out.push(start);
    let mut y = [start.u, start.u_prime];
    for w in path.windows(2) {
        let seg = Segment { op, z0: w[0], dz: w[1] - w[0] };
        y = match opts.fixed_steps {
            Some(n) => fixed(&seg, y, n.max(1))?,
            None => adaptive(&seg, y, opts)?,
        };
        out.push(SolutionSample { z: w[1], u: y[0], u_prime: y[1] });
    }
    Ok(out)
}

/// [`integrate_operator`] for the equation itself, with default tolerances.
pub fn integrate_reference<T: Real>(
    eq: &ConfluentHeun<T>,
    start: SolutionSample<T>,
    path: &[Complex<T>],
) -> Result<Vec<SolutionSample<T>>> {
    integrate_operator(&eq.operator().normalized()?, start, path, &RkOptions::default())
}

fn fixed<T: Real>(seg: &Segment<'_, T>, mut y: State<T>, n: usize) -> Result<State<T>> {
    let h = T::one() / cst::<T>(n as f64);
    for i in 0..n {
        let tau = cst::<T>(i as f64) * h;
        let k = seg.stages(tau, &y, h, seg.rhs(tau, &y));
        y = axpy(&y, &k[..6], &A[6], h);
    }
    finite(y, seg.z0 + seg.dz)
}

fn finite<T: Real>(y: State<T>, z: Complex<T>) -> Result<State<T>> {
    if is_finite(y[0]) && is_finite(y[1]) {
        Ok(y)
    } else {
        Err(Error::Evaluation(format!("integration blew up before {}", z)))
    }
}

fn adaptive<T: Real>(seg: &Segment<'_, T>, mut y: State<T>, opts: &RkOptions<T>) -> Result<State<T>> {
    let mut tau = T::zero();
    let mut h = cst::<T>(0.01);
    let mut k1 = seg.rhs(tau, &y);
    let h_min = cst::<T>(1e-14);
    for _ in 0..opts.max_steps {
        if tau >= T::one() {
            return finite(y, seg.z0 + seg.dz);
        }
        h = h.min(T::one() - tau);
        let k = seg.stages(tau, &y, h, k1);
        let y5 = axpy(&y, &k[..6], &A[6], h);
        let mut err = T::zero();
        for c in 0..2 {
            let mut e = Complex::new(T::zero(), T::zero());
            for (s, ks) in k.iter().enumerate() {
                e = e + ks[c] * cst::<T>(E[s]);
            }
            let sc = opts.atol + opts.rtol * y[c].norm().max(y5[c].norm());
            err = err.max((e * h).norm() / sc);
        }
        if !err.is_finite() {
            h = h * cst(0.2);
        } else if err <= T::one() {
            tau = if T::one() - tau - h <= cst::<T>(4.0) * T::epsilon() { T::one() } else { tau + h };
            y = y5;
            k1 = k[6];
            let f = if err == T::zero() { cst(5.0) } else { (cst::<T>(0.9) * err.powf(cst(-0.2))).min(cst(5.0)) };
            h = h * f;
            continue;
        } else {
            h = h * (cst::<T>(0.9) * err.powf(cst(-0.2))).max(cst(0.2));
        }
        if h < h_min {
            return Err(Error::StepUnderflow(format!("{}", seg.z0 + seg.dz * tau)));
        }
    }
    Err(Error::Convergence(format!("step budget exhausted before {}", seg.z0 + seg.dz)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Polynomial;

    fn c(x: f64) -> Complex<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn distance_examples() {
        assert!((distance_to_segment(c(0.0), c(-1.0), c(1.0))).abs() < 1e-15);
        assert!((distance_to_segment(Complex::new(0.0, 2.0), c(-1.0), c(1.0)) - 2.0).abs() < 1e-15);
        assert!((distance_to_segment(c(3.0), c(-1.0), c(1.0)) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn harmonic_oscillator() {
        let op = RationalOperator::new(Polynomial::one(), Polynomial::zero(), Polynomial::one()).unwrap();
        let start = SolutionSample { z: c(0.0), u: c(0.0), u_prime: c(1.0) };
        let out = integrate_operator(&op, start, &[c(0.0), c(1.0), Complex::new(1.0, 1.0)], &RkOptions::default()).unwrap();
        let z = Complex::new(1.0, 1.0);
        assert!((out[2].u - z.sin()).norm() < 1e-11);
        assert!((out[2].u_prime - z.cos()).norm() < 1e-11);
    }
}
