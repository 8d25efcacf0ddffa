//! Integral-free approximations of the variance.
//!
//! The pair contribution to `E{I²}` at truncation `m = 2` splits into pairs
//! farther apart than `2c` ([`s_gt_2c`], exact in closed form) and closer
//! pairs ([`s_lt_2c_exact`], one quadrature left). Expanding the latter for
//! small `λc` and `b = c / r0` gives the progressively simpler variance laws
//! [`var_closed`], [`var_order2`], [`var_order2_m3`] and [`var_exponential`].

use serde::{Deserialize, Serialize};

use crate::moments::{exp_window, mean_interference, ppp_cumulant};
use crate::scenario::ScenarioParams;
use crate::specfun::{gauss_2f1, try_integrate_semi_infinite, QuadratureSpec};
use crate::validity::{closed_form_flags, ValidityFlag};
use crate::{Error, Result};

/// The two small parameters of the expansions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallnessRatios {
    /// `c / r0`.
    pub b: f64,
    /// `λc`.
    pub lc: f64,
}

impl SmallnessRatios {
    pub fn of(p: &ScenarioParams) -> Self {
        SmallnessRatios { b: p.b(), lc: p.lambda_c() }
    }
}

/// Closed-form variance variants, as selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Closed,
    Order2,
    Order2M3,
    Exponential,
    Cov,
}

impl Variant {
    pub const ALL: [Variant; 5] =
        [Variant::Closed, Variant::Order2, Variant::Order2M3, Variant::Exponential, Variant::Cov];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Closed => "closed",
            Variant::Order2 => "order2",
            Variant::Order2M3 => "order2_m3",
            Variant::Exponential => "exponential",
            Variant::Cov => "cov",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown closed-form variant `{s}`")))
    }

    /// The variant's value: a variance, or the coefficient of variation for [`Variant::Cov`].
    pub fn eval(&self, p: &ScenarioParams) -> Result<f64> {
        match self {
            Variant::Closed => var_closed(p),
            Variant::Order2 => Ok(var_order2(p)),
            Variant::Order2M3 => Ok(var_order2_m3(p)),
            Variant::Exponential => Ok(var_exponential(p)),
            Variant::Cov => cov_approx(p),
        }
    }
}

/// Regime flags for the closed forms at `p`.
pub fn flags(p: &ScenarioParams) -> Vec<ValidityFlag> {
    closed_form_flags(p)
}

fn kappa2(p: &ScenarioParams) -> f64 {
    4.0 * p.lambda() * p.r0().powf(1.0 - 2.0 * p.eta()) / (2.0 * p.eta() - 1.0)
}

/// Pairs farther apart than `2c`:
/// `½E{I}² + 2λ² r0^(2−2η)/(η−1) · [(2b+1)^(1−η)/(η−1) + 2b·2F1(η, 2η−1; 2η; −2b)/(2η−1)]`.
pub fn s_gt_2c(p: &ScenarioParams) -> Result<f64> {
    let (lambda, r0, eta, b) = (p.lambda(), p.r0(), p.eta(), p.b());
    let mean = mean_interference(p);
    let bracket = (2.0 * b + 1.0).powf(1.0 - eta) / (eta - 1.0)
        + 2.0 * b * gauss_2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, -2.0 * b)? / (2.0 * eta - 1.0);
    Ok(0.5 * mean * mean + 2.0 * lambda * lambda * r0.powf(2.0 - 2.0 * eta) / (eta - 1.0) * bracket)
}

/// Pairs closer than `2c`, `4λμ ∫_{r0}^∞ ∫_{x+c}^{x+2c} x^-η y^-η e^(−μ(y−x−c)) dy dx`,
/// with the inner integral in incomplete-gamma form.
pub fn s_lt_2c_exact(p: &ScenarioParams, q: &QuadratureSpec) -> Result<f64> {
    if p.c() == 0.0 || p.is_empty() {
        return Ok(0.0);
    }
    let inner = q.tighter(10.0);
    let eta = p.eta();
    let outer = try_integrate_semi_infinite(|x| Ok(x.powf(-eta) * exp_window(p, x, &inner)?), p.r0(), 2.0 * eta, q)?
        .into_value()?;
    Ok(4.0 * p.lambda() * outer)
}

/// First-order expansion of [`s_lt_2c_exact`] for `μ(x + c) → ∞`, meaningful when `λ r0 ≫ 1`.
pub fn s_lt_2c_expansion(p: &ScenarioParams) -> Result<f64> {
    let (lambda, mu, c, r0, eta) = (p.lambda(), p.mu(), p.c(), p.r0(), p.eta());
    if c == 0.0 || p.is_empty() {
        return Ok(0.0);
    }
    let cm = c * mu;
    let first = 4.0 * lambda * (-(-cm).exp_m1()) * gauss_2f1(eta, 2.0 * eta - 1.0, 2.0 * eta, -c / r0)?
        / ((2.0 * eta - 1.0) * r0.powf(2.0 * eta - 1.0));
    let second =
        2.0 * lambda * ((-cm).exp() * (1.0 + cm) - 1.0) * gauss_2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -c / r0)?
            / (mu * r0.powf(2.0 * eta));
    Ok(first + second)
}

/// [`s_lt_2c_expansion`] expanded to second order in `λc`.
pub fn s_lt_2c_small_lc(p: &ScenarioParams) -> Result<f64> {
    let (lambda, r0, eta, b) = (p.lambda(), p.r0(), p.eta(), p.b());
    if b == 0.0 {
        return Ok(0.0);
    }
    let f1 = gauss_2f1(2.0 * eta - 1.0, eta, 2.0 * eta, -b)?;
    let f2 = gauss_2f1(2.0 * eta, eta + 1.0, 2.0 * eta + 1.0, -b)?;
    Ok(2.0 * lambda * lambda * r0.powf(2.0 - 2.0 * eta) * (2.0 * b * f1 / (2.0 * eta - 1.0) - 0.5 * b * b * f2))
}

/// `κ₂ + S_{>2c} + S_{<2c} − E{I}²` with the small-`λc` form of `S_{<2c}`.
pub fn var_closed(p: &ScenarioParams) -> Result<f64> {
    let mean = mean_interference(p);
    Ok(kappa2(p) + s_gt_2c(p)? + s_lt_2c_small_lc(p)? - mean * mean)
}

/// `κ₂(1 − λc) + λ²c² r0^-2η`.
pub fn var_order2(p: &ScenarioParams) -> f64 {
    let lc = p.lambda_c();
    kappa2(p) * (1.0 - lc) + lc * lc * p.r0().powf(-2.0 * p.eta())
}

/// `κ₂(1 − λc + λ²c²/2) + λ²c² r0^-2η`, the `m = 3` counterpart of [`var_order2`].
pub fn var_order2_m3(p: &ScenarioParams) -> f64 {
    let lc = p.lambda_c();
    kappa2(p) * (1.0 - lc + 0.5 * lc * lc) + lc * lc * p.r0().powf(-2.0 * p.eta())
}

/// `κ₂ e^(−λc)`.
pub fn var_exponential(p: &ScenarioParams) -> f64 {
    kappa2(p) * (-p.lambda_c()).exp()
}

/// `(η − 1)/√(2η − 1) · (λ r0)^(−1/2) · e^(−λc/2)`.
pub fn cov_approx(p: &ScenarioParams) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("coefficient of variation needs λ > 0".into()));
    }
    let eta = p.eta();
    Ok((eta - 1.0) / (2.0 * eta - 1.0).sqrt() / (p.lambda() * p.r0()).sqrt() * (-0.5 * p.lambda_c()).exp())
}

/// κ₂ of the Poisson process with the same intensity, for reference columns.
pub fn ppp_variance(p: &ScenarioParams) -> f64 {
    ppp_cumulant(p, 2).unwrap_or(0.0)
}
