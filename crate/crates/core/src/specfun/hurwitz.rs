//! Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^-s` for real `s > 1`, `a > 0`.
//!
//! The first `N` terms are summed directly and the remainder is replaced by
//! its Euler–Maclaurin expansion, with `N` chosen so that `a + N` is large
//! enough for the Bernoulli terms to decrease rapidly.

use super::CompensatedSum;
use crate::{Error, Result};

/// `B_{2j} / (2j)!` for `j = 1..=12`.
#[allow(clippy::excessive_precision)]
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    8.333_333_333_333_333_3e-2,
    -1.388_888_888_888_888_9e-3,
    3.306_878_306_878_306_9e-5,
    -8.267_195_767_195_767_2e-7,
    2.087_675_698_786_809_9e-8,
    -5.284_190_138_687_493_2e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_9e-13,
    8.586_062_056_277_844_6e-15,
    -2.174_868_698_558_062_2e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_3e-19,
];

pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain { function: "hurwitz_zeta", detail: format!("need s > 1, got s = {s}") });
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain { function: "hurwitz_zeta", detail: format!("need a > 0, got a = {a}") });
    }
    let shift = (10f64.max(s) - a).ceil().max(0.0) as usize;
    let mut sum = CompensatedSum::default();
    // smallest terms first
    for k in (0..shift).rev() {
        sum.add((k as f64 + a).powf(-s));
    }
    let x = a + shift as f64;
    let x_pow = x.powf(-s);
    sum.add(x * x_pow / (s - 1.0));
    sum.add(0.5 * x_pow);
    // Σ_j B_2j/(2j)! · s(s+1)…(s+2j−2) · x^(−s−2j+1)
    let mut rising = s;
    let mut power = x_pow / x;
    let inv_x2 = 1.0 / (x * x);
    for (j, coef) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = coef * rising * power;
        sum.add(term);
        if term.abs() < f64::EPSILON * 1e-2 * sum.value().abs() {
            break;
        }
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power *= inv_x2;
    }
    Ok(sum.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_forms() {
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - pi2 / 6.0).abs() < 1e-14);
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - pi2 / 2.0).abs() < 1e-13);
    }

    // mpmath at 40 digits
    #[test]
    fn reference_values() {
        for (s, a, want) in [
            (3.0, 7.3, 0.010_755_407_220_810_126_018_56),
            (3.0, 10.0, 0.005_524_917_485_401_033_731_052),
            (5.0, 10.5, 2.479_417_162_539_194_818_99e-5),
            (9.5, 0.7, 29.625_430_946_395_796_526_41),
            (1.5, 3.2, 1.212_112_179_641_868_429_301),
            (10.0, 0.5, 1_024.017_450_355_757_901_3),
            (3.0, 1000.0, 5.005_002_499_999_166_667_5e-7),
            (1.01, 2.0, 99.577_943_338_496_783_673_09),
        ] {
            let got = hurwitz_zeta(s, a).unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "ζ({s}, {a}) = {got}, want {want}");
        }
    }

    #[test]
    fn neighbor_identity_example() {
        let lhs = hurwitz_zeta(3.0, 7.3).unwrap() - hurwitz_zeta(3.0, 8.3).unwrap();
        assert!((lhs - 7.3f64.powi(-3)).abs() < 1e-15);
    }

    #[test]
    fn rejects_outside_domain() {
        assert!(hurwitz_zeta(1.0, 1.0).is_err());
        assert!(hurwitz_zeta(0.5, 1.0).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
        assert!(hurwitz_zeta(2.0, -1.0).is_err());
    }

    proptest! {
        #[test]
        fn neighbor_identity(s in 1.5f64..8.0, x in 0.5f64..50.0) {
            let lhs = hurwitz_zeta(s, x).unwrap();
            let rhs = hurwitz_zeta(s, x + 1.0).unwrap() + x.powf(-s);
            prop_assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0));
        }
    }
}
