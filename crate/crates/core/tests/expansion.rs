mod common;

use common::*;
use heun_gamma::equations::special_closed_form;
use heun_gamma::expansion::{assemble, assemble_auto, determine_c0, GammaSeries};
use heun_gamma::numerics::{gamma, kummer_1f1, upper_incomplete_gamma};
use heun_gamma::recurrence::{RecurrenceScheme, SchemeId};
use heun_gamma::{Complex64, ConfluentHeun64};

/// `u''` by a five-point stencil on the closed-form `u'`.
fn u2(ser: &GammaSeries<f64>, z: Complex64) -> Complex64 {
    let h = (1e-2 * (z - ser.center()).norm()).min(1e-3);
    let d = |k: f64| ser.evaluate(z + c(k * h)).unwrap().u_prime;
    (d(-2.0) - d(-1.0) * 8.0 + d(1.0) * 8.0 - d(2.0)) / (12.0 * h)
}

fn fixed(eq: &ConfluentHeun64, id: SchemeId) -> GammaSeries<f64> {
    let n = if id.expansion_type().power() == 1 { 60 } else { 90 };
    let mut ser = assemble_auto(eq, &RecurrenceScheme::new(id), n).unwrap();
    ser.fix_constant().unwrap();
    ser
}

#[test]
fn ode_residual_in_half_radius_disk() {
    let mut r = rng(11);
    for id in SchemeId::ALL {
        if id == SchemeId::DcheIOrigin {
            continue;
        }
        for _ in 0..4 {
            let eq = draw(&mut r, id);
            let ser = fixed(&eq, id);
            let rad = ser.convergence_radius();
            let rr = if rad.is_finite() { rad / 2.0 } else { 1.0 };
            for _ in 0..10 {
                let z = ser.center() + disk(&mut r, rr - 3e-3);
                let e = ser.evaluate(z).unwrap();
                let (res, scale) = eq.residual(z, e.u, e.u_prime, u2(&ser, z));
                assert!(res.norm() <= 1e-7 * scale, "{id} z={z} res={:e} scale={scale:e}", res.norm());
            }
        }
    }
}

#[test]
fn irregular_center_is_reported() {
    let eq = ConfluentHeun64::dche(c(0.7), c(0.4), c(0.5), c(0.6), c(0.3));
    let ser = assemble_auto(&eq, &RecurrenceScheme::new(SchemeId::DcheIOrigin), 20).unwrap();
    assert!(ser.center_is_irregular());
    let ser = assemble_auto(&eq, &RecurrenceScheme::new(SchemeId::DcheIZ0), 20).unwrap();
    assert!(!ser.center_is_irregular());
}

#[test]
fn irregular_center_small_argument() {
    // asymptotic regime |z| ≪ |γ|
    let eq = ConfluentHeun64::dche(c(1.5), c(0.4), c(0.5), c(0.6), c(0.3));
    let mut ser = assemble(&eq, &RecurrenceScheme::new(SchemeId::DcheIOrigin), c(0.0), 30).unwrap();
    ser.fix_constant_at(Complex64::new(0.02, 0.01)).unwrap();
    for z in [Complex64::new(0.03, 0.0), Complex64::new(-0.01, 0.02)] {
        let e = ser.evaluate(z).unwrap();
        let (res, scale) = eq.residual(z, e.u, e.u_prime, u2(&ser, z));
        assert!(res.norm() <= 1e-7 * scale);
    }
}

#[test]
fn derivative_identity() {
    let mut r = rng(12);
    for id in SchemeId::ALL {
        let eq = draw(&mut r, id);
        let ser = fixed(&eq, id);
        let rad = ser.convergence_radius();
        let rr = if rad.is_finite() { rad / 2.0 } else { 1.0 };
        for _ in 0..20 {
            let z = ser.center() + disk(&mut r, rr);
            let (v, _) = ser.v_series(z).unwrap();
            let up = ser.evaluate(z).unwrap().u_prime;
            let lhs = up * ser.weight().eval(z).exp();
            assert!((lhs - v).norm() <= 1e-10 * v.norm(), "{id}");
        }
    }
}

#[test]
fn gauge_invariance() {
    let mut r = rng(13);
    for id in SchemeId::ALL {
        if id == SchemeId::DcheIOrigin {
            continue;
        }
        let eq = draw(&mut r, id);
        let ser = fixed(&eq, id);
        let rad = ser.convergence_radius();
        let rr = if rad.is_finite() { rad / 2.0 } else { 1.0 };
        for _ in 0..20 {
            let z = ser.center() + disk(&mut r, rr);
            let u = ser.evaluate(z).unwrap().u;
            let ur = ser.reconstruct(z).unwrap();
            assert!((u - ur).norm() <= 1e-8 * (u.norm() + 1.0), "{id}");
        }
    }
}

#[test]
fn upper_form_agrees_with_lower() {
    // real positive s and w keep every principal power on its principal branch; few
    // terms, since C₀ and the complete Γ(a_n) terms cancel
    let eq = ConfluentHeun64::sche(c(0.3), c(0.4), c(0.8), c(0.6), c(0.6));
    let mut ser = assemble(&eq, &RecurrenceScheme::new(SchemeId::ScheIOrigin), c(0.0), 6).unwrap();
    ser.fix_constant().unwrap();
    for x in [0.01, 0.05, 0.1] {
        let a = ser.evaluate(c(x)).unwrap().u;
        let b = ser.evaluate_upper(c(x)).unwrap();
        assert!((a - b).norm() <= 1e-9 * (a.norm() + 1.0));
    }
}

#[test]
fn reference_point_independence() {
    let mut r = rng(14);
    for _ in 0..5 {
        let eq = draw(&mut r, SchemeId::ScheIOrigin);
        let mut ser = assemble(&eq, &RecurrenceScheme::new(SchemeId::ScheIOrigin), c(0.0), 40).unwrap();
        let h = ser.convergence_radius().min(1.0) * 0.4;
        let k1 = determine_c0(&mut ser, Complex64::from_polar(h, 0.3)).unwrap();
        let k2 = determine_c0(&mut ser, Complex64::from_polar(h * 0.6, 2.5)).unwrap();
        assert!((k1 - k2).norm() <= 1e-8 * k1.norm(), "{k1} {k2}");
    }
}

#[test]
fn reference_point_errors() {
    let eq = ConfluentHeun64::sche(c(0.3), c(0.4), c(0.8), c(1.0), c(0.2));
    let mut ser = assemble(&eq, &RecurrenceScheme::new(SchemeId::ScheIOrigin), c(0.0), 10).unwrap();
    assert!(matches!(ser.fix_constant_at(c(0.9)), Err(heun_gamma::Error::Region(_))));
    let mut ser = assemble_auto(&eq, &RecurrenceScheme::new(SchemeId::ScheIZ0), 10).unwrap();
    assert!(matches!(ser.fix_constant_at(c(0.2)), Err(heun_gamma::Error::SingularRef(_))));
}

#[test]
fn gamma_parameters() {
    let eq = ConfluentHeun64::bche(c(0.3), c(0.4), c(0.8), c(0.6), c(0.2));
    let ser = assemble_auto(&eq, &RecurrenceScheme::new(SchemeId::BcheIIOrigin), 5).unwrap();
    assert_eq!(ser.p(), 2);
    assert!((ser.gamma_parameter(3) - (ser.mu() + 4.0) / 2.0).norm() < 1e-15);
    let eq = ConfluentHeun64::tche(c(0.3), c(0.4), c(0.8), c(0.6), c(0.2));
    let ser = assemble_auto(&eq, &RecurrenceScheme::new(SchemeId::TcheIIcZ0), 5).unwrap();
    assert_eq!(ser.p(), 3);
    assert!((ser.gamma_parameter(1) - c(4.0 / 3.0)).norm() < 1e-15);
}

/// Right side of `₁F₁(a;b;z) = 1 + (a/b) Σ (b−a)_n/((b+1)_n n!) (Γ(1+n;−z) − Γ(1+n;0))`.
fn kummer_by_gamma(a: f64, b: f64, z: f64) -> Complex64 {
    let (a, b, z) = (c(a), c(b), c(z));
    let mut sum = c(0.0);
    let mut w = c(1.0);
    for n in 0..80 {
        if n > 0 {
            w *= (b - a + (n - 1) as f64) / ((b + n as f64) * n as f64);
        }
        let m = c(1.0 + n as f64);
        let diff = upper_incomplete_gamma(m, -z).unwrap() - gamma(m).unwrap();
        sum += w * diff;
    }
    c(1.0) + a / b * sum
}

#[test]
fn kummer_as_gamma_series() {
    for (a, b) in [(0.3, 1.7), (2.0, 3.5), (-0.4, 1.2)] {
        for k in 0..=20 {
            let z = -2.0 + 0.2 * k as f64;
            let want = kummer_1f1(c(a), c(b), c(z)).unwrap();
            let got = kummer_by_gamma(a, b, z);
            assert!((got - want).norm() <= 1e-9 * want.norm(), "a={a} b={b} z={z}");
        }
    }
}

#[test]
fn kummer_limit_constant_is_value_at_origin() {
    // BCHE with ε = q = 0 and λ² − δλ + α = 0: u = e^{−λz} M(γλ/(2λ−δ), γ, (2λ−δ)z)
    let (g, d, a) = (c(0.7), c(0.9), c(-0.8));
    let lam = (d + (d * d - a * 4.0).sqrt()) / 2.0;
    let eq = ConfluentHeun64::bche(g, d, c(0.0), a, c(0.0));
    let s = RecurrenceScheme::with_lambda(SchemeId::BcheIOrigin, lam);
    let mut ser = assemble(&eq, &s, c(1.0), 50).unwrap();
    let k = ser.fix_constant().unwrap();
    let norm = ser.evaluate(c(0.0)).unwrap().u;
    assert!((norm - k).norm() <= 1e-12 * k.norm());
    let kappa = lam * 2.0 - d;
    for z in [c(0.3), Complex64::new(-0.5, 0.4), c(1.2)] {
        let want = (-lam * z).exp() * kummer_1f1(g * lam / kappa, g, kappa * z).unwrap();
        let got = ser.evaluate(z).unwrap().u / k;
        assert!((got - want).norm() <= 1e-10 * want.norm(), "{got} {want}");
    }
}

fn match_closed_form(eq: &ConfluentHeun64, id: SchemeId, probes: &[Complex64]) -> f64 {
    let cf = special_closed_form(eq).unwrap();
    let ser = fixed(eq, id);
    let base = ser.center() + Complex64::from_polar(0.2, 0.4);
    let e = ser.evaluate(base).unwrap();
    let (c1, c2) = cf.match_constants(base, e.u, e.u_prime).unwrap();
    probes
        .iter()
        .map(|&z| {
            let got = ser.evaluate(z).unwrap().u;
            let (want, _) = cf.evaluate(c1, c2, z).unwrap();
            (got - want).norm() / want.norm()
        })
        .fold(0.0, f64::max)
}

#[test]
fn biconfluent_kummer_case() {
    let mut r = rng(15);
    for _ in 0..5 {
        let p = [annulus(&mut r, 0.2, 1.0), c(0.0), annulus(&mut r, 0.2, 1.0), annulus(&mut r, 0.2, 1.0), c(0.0)];
        let eq = variant_eq(heun_gamma::Variant::Bche, p);
        let probes: Vec<Complex64> = (0..10).map(|_| disk(&mut r, 1.0)).collect();
        for id in [SchemeId::BcheIIOrigin, SchemeId::BcheIOrigin] {
            let err = match_closed_form(&eq, id, &probes);
            assert!(err <= 1e-8, "{id} {err:e}");
        }
    }
}

#[test]
fn triconfluent_kummer_case() {
    let mut r = rng(16);
    for _ in 0..5 {
        let (e, a, q) = (annulus(&mut r, 0.2, 1.0), annulus(&mut r, 0.5, 1.0), annulus(&mut r, 0.2, 1.0));
        let z0 = q / a;
        let eq = ConfluentHeun64::tche(e * z0 * z0, -e * z0 * 2.0, e, a, q);
        let probes: Vec<Complex64> = (0..10).map(|_| z0 + disk(&mut r, 1.0)).collect();
        let err = match_closed_form(&eq, SchemeId::TcheIIcZ0, &probes);
        assert!(err <= 1e-8, "{err:e}");
    }
}

#[test]
fn single_precision_series() {
    use heun_gamma::{Complex32, ConfluentHeun};
    let c32 = |x: f32| Complex32::new(x, 0.0);
    let eq = ConfluentHeun::sche(c32(0.3), c32(0.4), c32(0.8), c32(0.6), c32(0.2));
    let s = RecurrenceScheme::new(SchemeId::ScheIOrigin);
    let mut ser = heun_gamma::expansion::assemble(&eq, &s, c32(0.0), 20).unwrap();
    ser.fix_constant().unwrap();
    let eq64 = ConfluentHeun64::sche(c(0.3), c(0.4), c(0.8), c(0.6), c(0.2));
    let mut ser64 = heun_gamma::expansion::assemble(&eq64, &RecurrenceScheme::new(SchemeId::ScheIOrigin), c(0.0), 20).unwrap();
    ser64.fix_constant().unwrap();
    let z = Complex32::new(0.1, 0.05);
    let a = ser.evaluate(z).unwrap().u;
    let b = ser64.evaluate(Complex64::new(0.1, 0.05)).unwrap().u;
    assert!(((a.re as f64 - b.re).powi(2) + (a.im as f64 - b.im).powi(2)).sqrt() < 1e-4 * (1.0 + b.norm()));
}
