mod common;

use common::*;
use heun_gamma::expansion::GammaSeries;
use heun_gamma::recurrence::{build_recurrence, RecurrenceScheme, SchemeId};
use heun_gamma::termination::{coefficients_as_q_polynomials, find_terminating_q, rhs_alpha, verify_finite_sum};
use heun_gamma::{Complex64, ConfluentHeun64, Error};

fn terminating(id: SchemeId, g: Complex64, d: Complex64, e: Complex64, n: usize, mu: Complex64) -> ConfluentHeun64 {
    let base = ConfluentHeun64::new(id.variant(), g, d, e, c(1.0), c(0.0));
    let s = RecurrenceScheme::new(id);
    base.with_alpha(rhs_alpha(&base, &s, n, mu).unwrap())
}

#[test]
fn cleared_form_matches_recurrence() {
    let mut r = rng(31);
    for id in [SchemeId::ScheIOrigin, SchemeId::DcheIOrigin, SchemeId::ScheIZ0, SchemeId::DcheIZ0] {
        let eq = draw(&mut r, id);
        let s = RecurrenceScheme::new(id);
        let mu = build_recurrence(&eq, &s).unwrap().exponents().unwrap().admissible[0];
        let polys = coefficients_as_q_polynomials(&eq, &s, mu, 5).unwrap();
        assert_eq!(polys[0].0.coeffs(), &[c(1.0)]);
        for _ in 0..10 {
            let q = annulus(&mut r, 0.2, 1.0);
            let direct = build_recurrence(&eq.with_q(q), &s).unwrap().generate(mu, 5).unwrap();
            for (n, (dn, ln)) in polys.iter().enumerate() {
                let got = dn.eval(q) / ln.eval(q);
                let want = direct.get(n as i64);
                // rounding bound of the polynomial evaluation
                let cond = dn.coeffs().iter().rev().fold(0.0, |acc, k| acc * q.norm() + k.norm()) / ln.eval(q).norm();
                assert!((got - want).norm() <= 1e-10 * want.norm().max(cond), "{id} n={n} {got} {want}");
            }
        }
    }
}

#[test]
fn degree_bound_single_confluent() {
    let eq = ConfluentHeun64::sche(c(0.3), c(0.6), c(0.9), c(0.7), c(0.0));
    let polys = coefficients_as_q_polynomials(&eq, &RecurrenceScheme::new(SchemeId::ScheIOrigin), c(0.0), 4).unwrap();
    for (n, (d, _)) in polys.iter().enumerate() {
        assert!(d.degree().unwrap_or(0) <= 2 * n);
    }
}

#[test]
fn single_confluent_example() {
    let id = SchemeId::ScheIOrigin;
    let eq = terminating(id, c(1.0), c(1.0), c(1.0), 1, c(0.0));
    assert_eq!(eq.alpha, c(3.0));
    let s = RecurrenceScheme::new(id);
    let polys = coefficients_as_q_polynomials(&eq, &s, c(0.0), 2).unwrap();
    assert!(polys[2].0.degree().unwrap_or(0) >= 1);
    let cand = find_terminating_q(&eq, &s, 1, c(0.0)).unwrap();
    assert!(!cand.certified.is_empty(), "{cand:?}");
    for root in &cand.certified {
        // c_{N+3} follows from the relation once the trailing coefficient vanishes
        let seq = build_recurrence(&eq.with_q(root.q), &s).unwrap().generate(c(0.0), 4).unwrap();
        let peak = seq.coeffs()[..2].iter().fold(0.0f64, |m, v| m.max(v.norm()));
        assert!(seq.coeffs()[4].norm() <= 1e-8 * peak);
    }
}

#[test]
fn double_confluent_example() {
    let id = SchemeId::DcheIOrigin;
    let eq = terminating(id, c(1.0), c(0.5), c(2.0), 1, c(0.0));
    assert_eq!(eq.alpha, c(3.0));
    let cand = find_terminating_q(&eq, &RecurrenceScheme::new(id), 1, c(0.0)).unwrap();
    assert!(!cand.certified.is_empty(), "{cand:?}");
}

#[test]
fn perturbed_root_is_not_a_finite_sum() {
    let id = SchemeId::ScheIOrigin;
    let eq = terminating(id, c(1.0), c(1.0), c(1.0), 1, c(0.0));
    let s = RecurrenceScheme::new(id);
    let cand = find_terminating_q(&eq, &s, 1, c(0.0)).unwrap();
    // the response is linear in the shift with a root-dependent slope: about
    // 0.085 at q ≈ 1.382 and larger at q ≈ 3.618
    let mut worst: f64 = 0.0;
    for root in &cand.certified {
        let eqq = eq.with_q(root.q + 1e-3);
        let seq = build_recurrence(&eqq, &s).unwrap().generate(c(0.0), 1).unwrap();
        let mut ser = GammaSeries::from_coefficients(&eqq, &s, seq).unwrap();
        ser.fix_constant().unwrap();
        let r = verify_finite_sum(&ser).unwrap();
        assert!(r > 1e-5, "q={} residual {r:e}", root.q);
        worst = worst.max(r);
    }
    assert!(worst > 1e-4);
}

#[test]
fn unsupported_and_misconfigured() {
    let eq = ConfluentHeun64::tche(c(0.3), c(0.6), c(0.9), c(0.7), c(0.2));
    for id in [SchemeId::TcheIZ0, SchemeId::TcheIIqZ0, SchemeId::TcheIIcZ0] {
        let r = rhs_alpha(&eq, &RecurrenceScheme::new(id), 2, c(2.0));
        assert!(matches!(r, Err(Error::UnsupportedScheme(_))));
    }
    let eq = ConfluentHeun64::sche(c(0.3), c(0.6), c(0.9), c(0.7), c(0.2));
    let r = find_terminating_q(&eq, &RecurrenceScheme::new(SchemeId::ScheIOrigin), 1, c(0.0));
    assert!(matches!(r, Err(Error::Precondition(_))));
}

#[test]
fn collapse_at_small_orders() {
    let mut r = rng(32);
    let mut counterexamples = Vec::new();
    for id in [SchemeId::ScheIOrigin, SchemeId::DcheIOrigin] {
        for n in 1..=3 {
            for _ in 0..5 {
                let (g, d, e) = (annulus(&mut r, 0.3, 1.0), annulus(&mut r, 0.3, 1.0), annulus(&mut r, 0.3, 1.0));
                let eq = terminating(id, g, d, e, n, c(0.0));
                let cand = find_terminating_q(&eq, &RecurrenceScheme::new(id), n, c(0.0)).unwrap();
                if cand.certified.is_empty() {
                    counterexamples.push(format!("{id} N={n} γ={g} δ={d} ε={e}: {:?}", cand.uncertified));
                }
            }
        }
    }
    assert!(counterexamples.is_empty(), "{counterexamples:#?}");
}

#[test]
fn finite_sums_up_to_order_four() {
    for id in [SchemeId::ScheIOrigin, SchemeId::DcheIOrigin] {
        for n in 1..=4 {
            let eq = terminating(id, c(0.8), c(0.6), c(0.9), n, c(0.0));
            let s = RecurrenceScheme::new(id);
            let cand = find_terminating_q(&eq, &s, n, c(0.0)).unwrap();
            assert!(!cand.certified.is_empty(), "{id} N={n}: {cand:?}");
            for root in &cand.certified {
                let eqq = eq.with_q(root.q);
                let seq = build_recurrence(&eqq, &s).unwrap().generate(c(0.0), n).unwrap();
                let mut ser = GammaSeries::from_coefficients(&eqq, &s, seq).unwrap();
                ser.fix_constant().unwrap();
                assert!(verify_finite_sum(&ser).unwrap() <= 1e-8, "{id} N={n} q={}", root.q);
            }
        }
    }
}

/// γ = δ = ε = 1: every order has N + 1 terminating roots, plus the root
/// `q = (N+1)(N+2)` of `c_{N+1}` at which `c_{N+2}` survives.
#[test]
fn high_order_root_count() {
    let id = SchemeId::ScheIOrigin;
    for n in [5, 8] {
        let eq = terminating(id, c(1.0), c(1.0), c(1.0), n, c(0.0));
        let cand = find_terminating_q(&eq, &RecurrenceScheme::new(id), n, c(0.0)).unwrap();
        assert_eq!(cand.certified.len(), n + 1, "N={n}");
        assert_eq!(cand.uncertified.len(), 1);
        let extra = ((n + 1) * (n + 2)) as f64;
        assert!((cand.uncertified[0].q - extra).norm() < 1e-9 * extra);
        assert!(cand.certified.iter().all(|r| r.residual.unwrap() <= 1e-10));
    }
}
