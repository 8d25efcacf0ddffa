//! Adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! The interval with the largest error estimate is bisected until the total
//! error estimate meets `max(abs_tol, rel_tol·|value|)` or the subdivision
//! budget runs out. Semi-infinite ranges are mapped onto `(0, 1]` by
//! `u = lo / x`, so power-law tails are integrated without truncation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-9, abs_tol: 1e-300, max_subdivisions: 2000 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec { rel_tol, abs_tol, max_subdivisions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        Self::new(rel_tol, QuadratureSpec::default().abs_tol, QuadratureSpec::default().max_subdivisions)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(format!(
                "quadrature spec needs rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1 (got {self:?})"
            )));
        }
        Ok(())
    }

    /// The same spec with both tolerances divided by `factor`.
    pub fn tighter(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: (self.rel_tol / factor).max(f64::EPSILON * 10.0),
            abs_tol: self.abs_tol / factor,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl QuadratureResult {
    fn zero() -> Self {
        QuadratureResult { value: 0.0, error_estimate: 0.0, converged: true }
    }

    /// The value, or [`Error::NoConvergence`] when the tolerance was not met.
    pub fn into_value(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NoConvergence { value: self.value, error_estimate: self.error_estimate })
        }
    }
}

/// `∫_lo^hi f(x) dx`. An empty range (`lo == hi`) integrates to zero.
pub fn integrate_finite<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_finite(|x| Ok(f(x)), lo, hi, spec)
}

/// [`integrate_finite`] for integrands that can fail, e.g. nested quadratures.
pub fn try_integrate_finite<F>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!("finite quadrature needs finite lo <= hi (got [{lo}, {hi}])")));
    }
    if lo == hi {
        return Ok(QuadratureResult::zero());
    }
    adaptive(f, lo, hi, spec)
}

/// `∫_lo^∞ f(x) dx` for an integrand decaying like `x^-decay`, `decay > 1`.
pub fn integrate_semi_infinite<F>(mut f: F, lo: f64, decay: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), lo, decay, spec)
}

pub fn try_integrate_semi_infinite<F>(mut f: F, lo: f64, decay: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    spec.validate()?;
    if !(decay > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "semi-infinite integral diverges for decay exponent {decay} <= 1"
        )));
    }
    if !(lo > 0.0 && lo.is_finite()) {
        return Err(Error::InvalidParameter(format!("semi-infinite quadrature needs lo > 0 (got {lo})")));
    }
    // x = lo / u maps [lo, ∞) onto (0, 1]; Kronrod nodes never touch u = 0
    adaptive(
        |u| {
            let x = lo / u;
            let v = f(x)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { abscissa: x });
            }
            Ok(v * lo / (u * u))
        },
        0.0,
        1.0,
        spec,
    )
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F>(mut f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let first = kronrod21(&mut f, lo, hi)?;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut segments = 1;

    while error > spec.tolerance(value) && segments < spec.max_subdivisions {
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        // stop splitting once the bisection point is no longer representable
        if !(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 1e3 * f64::EPSILON * mid.abs() {
            heap.push(worst);
            break;
        }
        let left = kronrod21(&mut f, worst.lo, mid)?;
        let right = kronrod21(&mut f, mid, worst.hi)?;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        segments += 1;
    }

    // re-sum to shed the drift of the incremental updates
    let mut parts: Vec<Segment> = heap.into_vec();
    parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value: f64 = parts.iter().map(|s| s.value).collect::<super::CompensatedSum>().value();
    let error: f64 = parts.iter().map(|s| s.error).sum();
    Ok(QuadratureResult { value, error_estimate: error, converged: error <= spec.tolerance(value) })
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

fn kronrod21<F>(f: &mut F, lo: f64, hi: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { abscissa: x })
        }
    };

    let fc = eval(center)?;
    let mut res_k = WGK[10] * fc;
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { lo, hi, value, error: err })
}
