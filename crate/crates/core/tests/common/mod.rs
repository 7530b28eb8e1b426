#![allow(dead_code)]

use heun_gamma::recurrence::SchemeId;
use heun_gamma::{Complex64, ConfluentHeun64, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in the disk `|z| < r`.
pub fn disk(r: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let rho = radius * r.gen::<f64>().sqrt();
    Complex64::from_polar(rho, r.gen_range(0.0..std::f64::consts::TAU))
}

/// Uniform in the annulus `lo ≤ |z| < hi`, keeping parameters away from zero.
pub fn annulus(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(r.gen_range(lo..hi), r.gen_range(0.0..std::f64::consts::TAU))
}

/// Random equation of the scheme's variant with parameters in the unit polydisc.
pub fn draw(r: &mut ChaCha8Rng, id: SchemeId) -> ConfluentHeun64 {
    let p: Vec<Complex64> = (0..5).map(|_| annulus(r, 0.2, 1.0)).collect();
    ConfluentHeun64::new(id.variant(), p[0], p[1], p[2], p[3], p[4])
}

pub fn variant_eq(v: Variant, p: [Complex64; 5]) -> ConfluentHeun64 {
    ConfluentHeun64::new(v, p[0], p[1], p[2], p[3], p[4])
}
