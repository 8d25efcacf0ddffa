//! Pair correlation against the renewal-density series and its integral identity.

use hardcore_interference::pcf::{pcf, pcf_branch, rho3, K_MAX};
use hardcore_interference::scenario::{make_scenario, Rate, ScenarioParams};
use hardcore_interference::specfun::integrate_finite;
use hardcore_interference::QuadratureSpec;

fn scenario(lambda: f64, c: f64) -> ScenarioParams {
    make_scenario(Rate::Intensity(lambda), c, 100.0, 3.0).unwrap()
}

/// `λ Σ_j f^{*j}(d)`: the j-fold headway sum is an Erlang(j, μ) shifted by jc.
fn renewal_series(d: f64, lambda: f64, mu: f64, c: f64) -> f64 {
    let mut sum = 0.0;
    let mut ln_fact = 0.0; // ln (j − 1)!
    let mut j = 1u32;
    while (j as f64) * c <= d {
        let t = d - j as f64 * c;
        if j > 1 {
            ln_fact += ((j - 1) as f64).ln();
        }
        let ln_term = j as f64 * mu.ln() + (j - 1) as f64 * t.ln() - mu * t - ln_fact;
        sum += if t == 0.0 && j > 1 { 0.0 } else { ln_term.exp() };
        j += 1;
    }
    lambda * sum
}

#[test]
fn matches_renewal_series() {
    for (lambda, c) in [(0.1, 4.0), (0.1, 8.0), (0.025, 16.0), (0.05, 1.0)] {
        let p = scenario(lambda, c);
        for i in 1..400 {
            let d = c * (1.0 + i as f64 * 0.0937);
            let v = pcf(d, &p);
            if v.truncated {
                continue;
            }
            let want = renewal_series(d, lambda, p.mu(), c);
            assert!(((v.value - want) / want).abs() < 1e-11, "λ={lambda} c={c} d={d}: {} vs {want}", v.value);
        }
    }
}

#[test]
fn zero_inside_exclusion() {
    let p = scenario(0.1, 4.0);
    for d in [0.0, 1.0, 3.999] {
        assert_eq!(pcf(d, &p).value, 0.0);
    }
    assert!(pcf(4.0, &p).value > 0.0);
}

#[test]
fn branch_is_one_interval() {
    let p = scenario(0.1, 4.0);
    assert_eq!(pcf_branch(2, 7.9, &p), 0.0);
    assert_eq!(pcf_branch(2, 12.0, &p), 0.0);
    assert_eq!(pcf_branch(2, 10.0, &p), pcf(10.0, &p).value);
}

#[test]
fn large_separations_flag_truncation() {
    let p = scenario(0.1, 4.0);
    let v = pcf((K_MAX + 3) as f64 * 4.0, &p);
    assert!(v.truncated);
    assert!((v.value - p.lambda() * p.lambda()).abs() < 1e-15);
}

#[test]
fn integrated_excess_matches_renewal_identity() {
    // ∫_0^∞ (ρ(d) − λ²) dd = λ (CV² − 1) / 2 with CV = 1 − λc
    let q = QuadratureSpec::new(1e-12, 1e-18, 2000).unwrap();
    for (lambda, c) in [(0.1, 4.0), (0.1, 8.0), (0.05, 4.0), (0.025, 8.0)] {
        let p = scenario(lambda, c);
        let l2 = lambda * lambda;
        let mut total = -l2 * c;
        for k in 1..K_MAX {
            let (a, b) = (k as f64 * c, (k + 1) as f64 * c);
            total += integrate_finite(|d| pcf_branch(k, d, &p) - l2, a, b, &q).unwrap().value;
        }
        let cv = 1.0 - lambda * c;
        let want = lambda * (cv * cv - 1.0) / 2.0;
        assert!(((total - want) / want).abs() < 1e-8, "λ={lambda} c={c}: {total} vs {want}");
    }
}

#[test]
fn triple_density_factorises() {
    let p = scenario(0.1, 4.0);
    for (d1, d2) in [(4.5, 6.0), (9.0, 13.0), (2.0, 5.0)] {
        let want = pcf(d1, &p).value * pcf(d2, &p).value / p.lambda();
        assert!((rho3(d1, d2, &p) - want).abs() <= 1e-15 * want.abs().max(1e-300));
    }
}
