use num_complex::Complex;
use num_traits::Zero;

use super::{cst, is_finite, Real};
use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate_segment`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum number of subintervals.
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadOptions<T> {
    fn default() -> Self {
        QuadOptions { rel_tol: cst(1e-11), abs_tol: T::zero(), max_intervals: 2000 }
    }
}

fn kronrod<T: Real, F: Fn(Complex<T>) -> Complex<T>>(
    f: &F,
    za: Complex<T>,
    zb: Complex<T>,
) -> (Complex<T>, T) {
    let half = (zb - za) * cst::<T>(0.5);
    let mid = za + half;
    let fc = f(mid);
    let mut k = fc * cst::<T>(WGK[7]);
    let mut g = fc * cst::<T>(WG[3]);
    for j in 0..7 {
        let dx = half * cst::<T>(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        k = k + s * cst::<T>(WGK[j]);
        if j % 2 == 1 {
            g = g + s * cst::<T>(WG[j / 2]);
        }
    }
    (k * half, ((k - g) * half).norm())
}

/// Adaptive Gauss–Kronrod (7/15) integral of `f` along the straight segment `za → zb`.
///
/// The subinterval with the largest error estimate is bisected until the
/// summed estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_segment<T: Real, F: Fn(Complex<T>) -> Complex<T>>(
    f: F,
    za: Complex<T>,
    zb: Complex<T>,
    opts: QuadOptions<T>,
) -> Result<Complex<T>> {
    let (v, e) = kronrod(&f, za, zb);
    let mut parts = vec![(za, zb, v, e)];
    loop {
        let total = parts.iter().fold(Complex::zero(), |acc, p| acc + p.2);
        let err = parts.iter().fold(T::zero(), |acc, p| acc + p.3);
        if !is_finite(total) {
            return Err(Error::Evaluation("quadrature integrand not finite".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(total);
        }
        if parts.len() >= opts.max_intervals {
            return Err(Error::Convergence(format!(
                "quadrature error estimate {:e} above tolerance after {} subintervals",
                err,
                parts.len()
            )));
        }
        let (k, _) = parts
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (a, b, _, _) = parts.swap_remove(k);
        let m = (a + b) * cst::<T>(0.5);
        let (v1, e1) = kronrod(&f, a, m);
        let (v2, e2) = kronrod(&f, m, b);
        parts.push((a, m, v1, e1));
        parts.push((m, b, v2, e2));
    }
}
