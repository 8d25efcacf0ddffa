//! First three raw interference moments at the cell centre under Rayleigh fading.
//!
//! Pairs closer than `mc` use the exact pair correlation, farther pairs the
//! Poisson value `λ²`. The third moment follows the same idea at `m = 2` for
//! pairs and for the triple term, whose opposite-side part treats the lone
//! vehicle as uncorrelated with the pair.
//!
//! Inner integrals over windows of length `c` are either reduced to
//! incomplete gamma functions or integrated adaptively with a tolerance ten
//! times tighter than the outer one.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pcf::branch_formula;
use crate::scenario::ScenarioParams;
use crate::specfun::{
    try_integrate_finite, try_integrate_semi_infinite, upper_incomplete_gamma_scaled, QuadratureSpec,
};
use crate::validity::{quadrature_flags, ValidityFlag};
use crate::{Error, Result};

/// How a [`MomentSet`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Poisson closed form (`c = 0`).
    Analytic,
    /// Numerical integration with the pair correlation truncated at `mc`.
    Quadrature {
        m: u32,
    },
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Analytic => f.write_str("Analytic/PPP"),
            Method::Quadrature { m } => write!(f, "Quadrature(m={m})"),
            Method::MonteCarlo => f.write_str("MonteCarlo"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean: f64,
    pub m2: f64,
    pub m3: Option<f64>,
    pub variance: f64,
    pub std_dev: f64,
    /// `std_dev / mean`, absent when the mean is zero.
    pub coeff_variation: Option<f64>,
    pub skewness: Option<f64>,
    pub method: Method,
    pub flags: Vec<ValidityFlag>,
}

impl MomentSet {
    /// Derived statistics from raw moments.
    ///
    /// A non-positive variance is an error unless all moments vanish.
    pub fn from_raw(mean: f64, m2: f64, m3: Option<f64>, method: Method) -> Result<Self> {
        let variance = m2 - mean * mean;
        let empty = mean == 0.0 && m2 == 0.0;
        if !(variance > 0.0) && !empty {
            return Err(Error::NonPositiveVariance(variance));
        }
        let std_dev = variance.max(0.0).sqrt();
        let coeff_variation = (mean > 0.0).then(|| std_dev / mean);
        let skewness =
            m3.filter(|_| variance > 0.0).map(|m3| (m3 - 3.0 * mean * m2 + 2.0 * mean.powi(3)) / variance.powf(1.5));
        Ok(MomentSet { mean, m2, m3, variance, std_dev, coeff_variation, skewness, method, flags: Vec::new() })
    }
}

/// `E{I} = 2λ r0^(1−η) / (η − 1)`, the same for every `c` at fixed `λ`.
pub fn mean_interference(p: &ScenarioParams) -> f64 {
    2.0 * p.lambda() * p.r0().powf(1.0 - p.eta()) / (p.eta() - 1.0)
}

/// Cumulant `κ_n = 2λ n! r0^(1−nη) / (nη − 1)` of the Poisson process with
/// the same intensity, `n = 1, 2, 3`.
pub fn ppp_cumulant(p: &ScenarioParams, n: u32) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("cumulant order n = {n} must be 1, 2 or 3")));
    }
    let ne = n as f64 * p.eta();
    let factorial = (1..=n).product::<u32>() as f64;
    Ok(2.0 * p.lambda() * factorial * p.r0().powf(1.0 - ne) / (ne - 1.0))
}

/// `E{I²}` with the pair correlation replaced by `λ²` beyond `mc`.
pub fn second_moment(p: &ScenarioParams, m: u32, q: &QuadratureSpec) -> Result<f64> {
    check_m(m)?;
    q.validate()?;
    if p.is_empty() {
        return Ok(0.0);
    }
    let single = 2.0 * p.lambda() * 2.0 * p.pathloss().integral_power(2, p.r0(), f64::INFINITY);
    Ok(single + pair_sum(p, 1, m, q)?)
}

/// `E{I³}` at truncation `m = 2`.
pub fn third_moment(p: &ScenarioParams, q: &QuadratureSpec) -> Result<f64> {
    q.validate()?;
    if p.is_empty() {
        return Ok(0.0);
    }
    let single = 6.0 * p.lambda() * 2.0 * p.pathloss().integral_power(3, p.r0(), f64::INFINITY);
    let pairs = pair_sum(p, 2, 2, q)?;
    Ok(single + 6.0 * pairs + same_side_triples(p, q)? + opposite_side_triples(p, q)?)
}

pub fn moment_set(p: &ScenarioParams, m: u32, with_third: bool, q: &QuadratureSpec) -> Result<MomentSet> {
    check_m(m)?;
    let mean = mean_interference(p);
    if p.is_poisson() {
        let (k1, k2, k3) = (ppp_cumulant(p, 1)?, ppp_cumulant(p, 2)?, ppp_cumulant(p, 3)?);
        let m3 = with_third.then(|| k3 + 3.0 * k2 * k1 + k1.powi(3));
        return MomentSet::from_raw(mean, k2 + k1 * k1, m3, Method::Analytic);
    }
    let m2 = second_moment(p, m, q)?;
    let m3 = if with_third { Some(third_moment(p, q)?) } else { None };
    let mut set = MomentSet::from_raw(mean, m2, m3, Method::Quadrature { m })?;
    set.flags = quadrature_flags(p);
    Ok(set)
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("truncation order m = {m} must be >= 2")));
    }
    Ok(())
}

/// `G(a) = ∫_a^∞ w^-η dw` for `a ≥ r0`.
fn tail(p: &ScenarioParams, a: f64) -> f64 {
    a.powf(1.0 - p.eta()) / (p.eta() - 1.0)
}

/// `μ ∫_{y+c}^{y+2c} w^-η e^(−μ(w−y−c)) dw` for `y + c ≥ r0`.
pub(crate) fn exp_window(p: &ScenarioParams, y: f64, q: &QuadratureSpec) -> Result<f64> {
    let (mu, c, eta) = (p.mu(), p.c(), p.eta());
    if c == 0.0 || mu == 0.0 {
        return Ok(0.0);
    }
    // the incomplete-gamma difference cancels when the window carries little mass
    if mu * c >= 0.05 {
        let a = 1.0 - eta;
        let near = upper_incomplete_gamma_scaled(a, mu * (y + c))?;
        let far = upper_incomplete_gamma_scaled(a, mu * (y + 2.0 * c))?;
        return Ok(mu.powf(eta) * (near - (-mu * c).exp() * far));
    }
    let start = y + c;
    let value =
        try_integrate_finite(|w| Ok(w.powf(-eta) * (-mu * (w - start)).exp()), start, start + c, q)?.into_value()?;
    Ok(mu * value)
}

/// `Σ_{k<m} ∫ g(x)^n g(y) ρ_k` over both orderings plus the `λ²` tail beyond `mc`,
/// doubled for `x ≤ −r0`.
fn pair_sum(p: &ScenarioParams, n: u32, m: u32, q: &QuadratureSpec) -> Result<f64> {
    let (r0, c, eta) = (p.r0(), p.c(), p.eta());
    let g = p.pathloss();
    let inner = q.tighter(10.0);
    let lambda2 = p.lambda() * p.lambda();
    let integrand = |x: f64| -> Result<f64> {
        let mut near = 0.0;
        for k in 1..m {
            near += if k == 1 {
                p.lambda() * exp_window(p, x, &inner)?
            } else {
                branch_window(p, k, x, x + k as f64 * c, &inner)?
            };
            near += down_window(p, k, x, &inner)?;
        }
        let reach = m as f64 * c;
        let far = lambda2
            * (g.integral_power(1, x + reach, f64::INFINITY) + g.integral_power(1, f64::NEG_INFINITY, x - reach));
        Ok(g.decay(x).powi(n as i32) * (near + far))
    };
    // the downward windows and the far tail cross the cell edges at these abscissae
    let mut breaks = Vec::new();
    for j in 0..=m {
        breaks.push(r0 + j as f64 * c);
        breaks.push(-r0 + j as f64 * c);
    }
    let decay = (n + 1) as f64 * eta - 1.0;
    Ok(2.0 * integrate_from_r0(integrand, r0, breaks, decay, q)?)
}

/// `∫_{lo}^{lo+c} g(y) ρ_k(y − x) dy` for a window entirely beyond the cell.
fn branch_window(p: &ScenarioParams, k: u32, x: f64, lo: f64, q: &QuadratureSpec) -> Result<f64> {
    let g = p.pathloss();
    let kk = k as u64;
    let value = try_integrate_finite(|y| Ok(g.eval(y) * branch_formula(kk, y - x, p)), lo, lo + p.c(), q)?;
    value.into_value()
}

/// `∫_{x−(k+1)c}^{x−kc} g(y) ρ_k(x − y) dy`, split at the cell edges.
fn down_window(p: &ScenarioParams, k: u32, x: f64, q: &QuadratureSpec) -> Result<f64> {
    let (r0, c) = (p.r0(), p.c());
    let g = p.pathloss();
    let kk = k as u64;
    let lo = x - (k + 1) as f64 * c;
    let hi = x - k as f64 * c;
    let mut total = 0.0;
    for (a, b) in [(lo.max(r0), hi), (lo, hi.min(-r0))] {
        if b > a {
            let v = try_integrate_finite(|y| Ok(g.eval(y) * branch_formula(kk, x - y, p)), a, b, q)?;
            total += v.into_value()?;
        }
    }
    Ok(total)
}

/// `∫_{r0}^∞ f`, splitting at the given breakpoints and mapping the last piece.
fn integrate_from_r0<F>(mut f: F, r0: f64, mut breaks: Vec<f64>, decay: f64, q: &QuadratureSpec) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    breaks.retain(|&b| b > r0 && b.is_finite());
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut total = 0.0;
    let mut lo = r0;
    for b in breaks {
        total += try_integrate_finite(&mut f, lo, b, q)?.into_value()?;
        lo = b;
    }
    total += try_integrate_semi_infinite(&mut f, lo, decay, q)?.into_value()?;
    Ok(total)
}

/// Ordered triples `x < y < w` on one side of the cell, both gaps from the
/// `m = 2` pair correlation, doubled for the other side.
fn same_side_triples(p: &ScenarioParams, q: &QuadratureSpec) -> Result<f64> {
    let (lambda, mu, c, r0, eta) = (p.lambda(), p.mu(), p.c(), p.r0(), p.eta());
    let inner = q.tighter(10.0);
    // weight of the third vehicle beyond y
    let w_of = |y: f64| -> Result<f64> { Ok(exp_window(p, y, &inner)? + lambda * tail(p, y + 2.0 * c)) };
    let g_r0 = tail(p, r0);
    // first gap beyond 2c: ∫_{r0}^{y−2c} g(x) dx in closed form
    let far = integrate_from_r0(
        |y| {
            if y <= r0 + 2.0 * c {
                return Ok(0.0);
            }
            Ok(y.powf(-eta) * w_of(y)? * (g_r0 - tail(p, y - 2.0 * c)))
        },
        r0,
        vec![r0 + 2.0 * c],
        2.0 * eta - 1.0,
        q,
    )?;
    // first gap within (c, 2c): ∫ x^-η e^(−μ(y−x−c)) dx over x ∈ [max(r0, y−2c), y−c]
    let near = if c > 0.0 {
        integrate_from_r0(
            |y| {
                if y <= r0 + c {
                    return Ok(0.0);
                }
                let (a, b) = ((y - 2.0 * c).max(r0), y - c);
                let v = try_integrate_finite(|x| Ok(x.powf(-eta) * (-mu * (b - x)).exp()), a, b, &inner)?;
                Ok(y.powf(-eta) * w_of(y)? * v.into_value()?)
            },
            r0,
            vec![r0 + c, r0 + 2.0 * c],
            3.0 * eta - 1.0,
            q,
        )?
    } else {
        0.0
    };
    Ok(12.0 * lambda * lambda * far + 12.0 * lambda * mu * near)
}

/// A lone vehicle on one side times a correlated pair on the other.
fn opposite_side_triples(p: &ScenarioParams, q: &QuadratureSpec) -> Result<f64> {
    let (lambda, c, r0, eta) = (p.lambda(), p.c(), p.r0(), p.eta());
    let inner = q.tighter(10.0);
    let pair = integrate_from_r0(
        |y| Ok(y.powf(-eta) * (lambda * tail(p, y + 2.0 * c) + exp_window(p, y, &inner)?)),
        r0,
        Vec::new(),
        2.0 * eta - 1.0,
        q,
    )?;
    Ok(12.0 * lambda * lambda * tail(p, r0) * pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{make_scenario, Rate};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn scenario(lambda: f64, c: f64, r0: f64, eta: f64) -> ScenarioParams {
        make_scenario(Rate::Intensity(lambda), c, r0, eta).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert!(rel(mean_interference(&scenario(0.1, 0.0, 100.0, 3.0)), 1e-5) < 1e-14);
        assert_eq!(
            mean_interference(&scenario(0.1, 4.0, 100.0, 3.0)),
            mean_interference(&scenario(0.1, 0.0, 100.0, 3.0))
        );
        assert!(rel(mean_interference(&scenario(0.025, 0.0, 500.0, 2.0)), 1e-4) < 1e-14);
    }

    #[test]
    fn cumulants() {
        let p = scenario(0.1, 0.0, 100.0, 3.0);
        assert!(rel(ppp_cumulant(&p, 1).unwrap(), 1e-5) < 1e-14);
        assert!(rel(ppp_cumulant(&p, 2).unwrap(), 8e-12) < 1e-14);
        assert!(rel(ppp_cumulant(&p, 3).unwrap(), 1.5e-17) < 1e-14);
        assert!(ppp_cumulant(&p, 4).is_err());
    }

    #[test]
    fn poisson_limits_of_quadrature() {
        let q = QuadratureSpec::default();
        let p = scenario(0.1, 0.0, 100.0, 3.0);
        assert!(rel(second_moment(&p, 2, &q).unwrap(), 1.08e-10) < 1e-9);
        assert!(rel(second_moment(&p, 5, &q).unwrap(), 1.08e-10) < 1e-9);
        assert!(rel(third_moment(&p, &q).unwrap(), 1.5e-17 + 2.4e-16 + 1e-15) < 1e-9);
        // a hair above zero goes through the hardcore integrals
        let p = scenario(0.1, 1e-6, 100.0, 3.0);
        assert!(rel(second_moment(&p, 2, &q).unwrap(), 1.08e-10) < 1e-6);
        assert!(rel(third_moment(&p, &q).unwrap(), 1.255e-15) < 1e-6);
    }

    #[test]
    fn empty_process() {
        let p = ScenarioParams::empty(4.0, 100.0, 3.0).unwrap();
        let q = QuadratureSpec::default();
        assert_eq!(second_moment(&p, 2, &q).unwrap(), 0.0);
        assert_eq!(third_moment(&p, &q).unwrap(), 0.0);
    }

    #[test]
    fn window_forms_agree() {
        let q = QuadratureSpec::with_rel_tol(1e-12).unwrap();
        for (lambda, c) in [(0.1, 4.0), (0.1, 0.5), (0.025, 20.0), (0.15, 6.0)] {
            let p = scenario(lambda, c, 100.0, 3.0);
            for y in [100.0, 130.0, 1e3, 5e4] {
                let closed = exp_window(&p, y, &q).unwrap();
                let quad = p.mu()
                    * crate::specfun::integrate_finite(
                        |w| w.powi(-3) * (-p.mu() * (w - y - c)).exp(),
                        y + c,
                        y + 2.0 * c,
                        &q,
                    )
                    .unwrap()
                    .value;
                assert!(rel(closed, quad) < 1e-10, "λ={lambda} c={c} y={y}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn moment_set_statistics() {
        let q = QuadratureSpec::default();
        let ppp = moment_set(&scenario(0.1, 0.0, 100.0, 3.0), 2, true, &q).unwrap();
        assert_eq!(ppp.method, Method::Analytic);
        assert!((ppp.skewness.unwrap() - 1.5e-17 / 8e-12f64.powf(1.5)).abs() < 1e-9);
        assert!((ppp.skewness.unwrap() - 0.663).abs() < 1e-3);
        let hc = moment_set(&scenario(0.1, 4.0, 100.0, 3.0), 2, true, &q).unwrap();
        assert_eq!(hc.method, Method::Quadrature { m: 2 });
        assert!(hc.coeff_variation.unwrap() < ppp.coeff_variation.unwrap());
        assert!(hc.skewness.unwrap() > 0.0);
        let no_third = moment_set(&scenario(0.1, 4.0, 100.0, 3.0), 2, false, &q).unwrap();
        assert!(no_third.skewness.is_none() && no_third.m3.is_none());
    }

    #[test]
    fn variance_reduction_with_tracking_distance() {
        let q = QuadratureSpec::default();
        let k2 = 8e-12;
        for c in [0.5, 1.0, 2.0, 4.0, 6.0] {
            let set = moment_set(&scenario(0.1, c, 100.0, 3.0), 2, false, &q).unwrap();
            assert!(set.variance < k2, "c = {c}");
        }
    }

    #[test]
    fn from_raw_rejects_negative_variance() {
        assert!(matches!(MomentSet::from_raw(1.0, 0.5, None, Method::MonteCarlo), Err(Error::NonPositiveVariance(_))));
        assert!(MomentSet::from_raw(0.0, 0.0, Some(0.0), Method::Analytic).is_ok());
    }

    #[test]
    fn method_labels() {
        assert_eq!(Method::Quadrature { m: 3 }.to_string(), "Quadrature(m=3)");
        assert_eq!(Method::Analytic.to_string(), "Analytic/PPP");
    }
}
