//! Log-gamma and the upper incomplete gamma function `Γ(a, x)` for real `a`.
//!
//! Negative orders are reached by the downward recurrence
//! `Γ(a, x) = (Γ(a + 1, x) − x^a e^-x) / a` from a base order in `[-1/2, 1/2)`
//! evaluated by a power series. For `x ≥ 3/2` the Legendre continued fraction
//! converges quickly at any order and is used directly, because the recurrence
//! cancels badly once `x` is large.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Above this abscissa the continued fraction is used for `a ≤ x − 1`.
const CF_THRESHOLD: f64 = 1.5;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (NaN otherwise).
pub fn ln_gamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        acc += coef / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `ln Γ(1 + a)` accurate in relative terms for small `|a|`.
fn ln_gamma_1p(a: f64) -> f64 {
    if a.abs() < 1e-3 {
        // −γa + Σ (−1)^k ζ(k) a^k / k
        #[allow(clippy::excessive_precision)]
        const ZETA: [f64; 5] = [
            1.644_934_066_848_226_4,
            1.202_056_903_159_594_3,
            1.082_323_233_711_138_2,
            1.036_927_755_143_37,
            1.017_343_061_984_449_1,
        ];
        let mut sum = -EULER_GAMMA * a;
        let mut pow = -a;
        for (i, z) in ZETA.iter().enumerate() {
            pow *= -a;
            let k = (i + 2) as f64;
            sum += z * pow / k;
        }
        sum
    } else {
        ln_gamma(1.0 + a)
    }
}

/// `Γ(a, x) = ∫_x^∞ t^(a−1) e^−t dt` for real `a` and `x > 0`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x < CF_THRESHOLD {
        Ok(small_x(a, x))
    } else {
        Ok(upper_incomplete_gamma_scaled(a, x)? * (-x).exp())
    }
}

/// `e^x Γ(a, x)`, which stays representable for large `x`.
pub fn upper_incomplete_gamma_scaled(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    if x >= CF_THRESHOLD && x >= a - 1.0 {
        return Ok(x.powf(a) * continued_fraction(a, x));
    }
    if x >= CF_THRESHOLD {
        // a > x + 1 > 0: complement of the lower series, no cancellation here
        return Ok(x.exp() * (ln_gamma(a).exp() - lower_series(a, x)));
    }
    Ok(x.exp() * small_x(a, x))
}

fn check(a: f64, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() || !a.is_finite() {
        return Err(Error::Domain {
            function: "upper_incomplete_gamma",
            detail: format!("need finite a and x > 0, got a = {a}, x = {x}"),
        });
    }
    Ok(())
}

/// Unscaled `Γ(a, x)` for `0 < x < 3/2`.
fn small_x(a: f64, x: f64) -> f64 {
    if a >= 0.5 {
        return ln_gamma(a).exp() - lower_series(a, x);
    }
    let base = a - (a + 0.5).floor();
    debug_assert!((-0.5..0.5).contains(&base));
    let mut value = near_zero_order(base, x);
    // Γ(s − 1, x) = (Γ(s, x) − x^(s−1) e^−x) / (s − 1)
    let mut s = base;
    let e = (-x).exp();
    while s > a + 0.5 {
        value = (value - x.powf(s - 1.0) * e) / (s - 1.0);
        s -= 1.0;
    }
    value
}

/// `Γ(a, x)` for `|a| ≤ 1/2`, `x` moderate:
/// `(Γ(1 + a) − x^a) / a − Σ_{k≥1} (−1)^k x^(a+k) / (k! (a + k))`.
fn near_zero_order(a: f64, x: f64) -> f64 {
    let ln_x = x.ln();
    let head = if a == 0.0 { -EULER_GAMMA - ln_x } else { (ln_gamma_1p(a).exp_m1() - (a * ln_x).exp_m1()) / a };
    let xa = (a * ln_x).exp();
    let mut term = 1.0; // (−x)^k / k!
    let mut tail = 0.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let t = term / (a + k as f64);
        tail += t;
        if t.abs() < f64::EPSILON * tail.abs() * 0.1 {
            break;
        }
    }
    head - xa * tail
}

/// Lower incomplete gamma `γ(a, x)` by its power series, `a > 0`.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..10_000 {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * f64::EPSILON * 0.1 {
            break;
        }
    }
    sum * (a * x.ln() - x).exp()
}

/// Modified Lentz evaluation of `x^-a e^x Γ(a, x)`.
fn continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < f64::EPSILON {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // reference values computed with mpmath at 40 digits
    #[test]
    fn ln_gamma_reference() {
        for &(x, want) in &[
            (0.5, 0.572_364_942_924_700_087_07),
            (1.0001, -0.000_057_713_342_220_471_268),
            (3.7, 1.428_072_326_665_388_129_2),
            (10.0, 12.801_827_480_081_469_611),
            (150.5, 602.513_954_870_585_411_95),
            (0.001, 6.907_178_885_383_853_661_7),
        ] {
            let got = ln_gamma(x);
            assert!((got - want).abs() < 1e-13 * want.abs().max(1.0), "lnΓ({x}) = {got}, want {want}");
        }
        assert!(ln_gamma(0.0).is_nan());
    }

    #[test]
    fn closed_forms() {
        assert!(rel(upper_incomplete_gamma(1.0, 2.0).unwrap(), (-2f64).exp()) < 1e-14);
        assert!(rel(upper_incomplete_gamma(0.5, 1.0).unwrap(), 0.278_805_585_280_661_976_5) < 1e-13);
    }

    #[test]
    fn reference_values() {
        let cases = [
            (-2.0, 1.5, 0.025_217_551_186_824_122_736),
            (-2.0, 0.01, 4_902.765_641_846_650_716),
            (-1.5, 3.0, 0.001_870_259_848_675_091_656_7),
            (0.0, 0.3, 0.905_676_651_675_846_739_85),
            (0.3, 0.5, 0.556_994_831_009_606_549_15),
            (-3.7, 12.0, 3.798_186_757_048_760_040_8e-11),
            (0.0, 5.0, 0.001_148_295_591_275_325_797_3),
            (2.5, 0.7, 1.228_726_964_865_296_512),
            (-4.0, 0.1, 2_190.159_522_402_804_122_5),
            (-4.0, 20.0, 5.191_956_624_636_057_143_7e-16),
            (-0.5, 0.2, 1.792_992_472_099_425_760_9),
            (-2.0, 50.0, 1.457_163_770_590_081_992_5e-27),
        ];
        for (a, x, want) in cases {
            let got = upper_incomplete_gamma(a, x).unwrap();
            assert!(rel(got, want) < 1e-12, "Γ({a}, {x}) = {got:e}, want {want:e}");
        }
        let scaled = upper_incomplete_gamma_scaled(-2.0, 1000.0).unwrap();
        assert!(rel(scaled, 9.970_119_403_574_999_803_5e-10) < 1e-12);
        let scaled = upper_incomplete_gamma_scaled(-2.0, 50.0).unwrap();
        assert!(rel(scaled, 7.554_965_057_435_182_653_8e-6) < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_x() {
        assert!(upper_incomplete_gamma(1.0, 0.0).is_err());
        assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
        assert!(upper_incomplete_gamma_scaled(1.0, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn upward_recurrence(a in -4.0f64..4.0, x in 0.1f64..20.0) {
            prop_assume!((a - a.round()).abs() > 1e-3 || a > 0.5);
            let lhs = upper_incomplete_gamma(a + 1.0, x).unwrap();
            let rhs = a * upper_incomplete_gamma(a, x).unwrap() + x.powf(a) * (-x).exp();
            prop_assert!(rel(rhs, lhs) < 1e-10, "a={} x={} lhs={:e} rhs={:e}", a, x, lhs, rhs);
        }

        #[test]
        fn recurrence_chain_at_negative_integers(n in 1u32..5, x in 0.1f64..20.0) {
            // Γ(−n, x) from the chain Γ(0, x) → Γ(−1, x) → … evaluated independently
            let mut v = upper_incomplete_gamma(0.0, x).unwrap();
            for k in 1..=n {
                let s = -(k as f64);
                v = (v - x.powf(s) * (-x).exp()) / s;
            }
            let direct = upper_incomplete_gamma(-(n as f64), x).unwrap();
            prop_assert!(rel(direct, v) < 1e-10);
        }
    }
}
