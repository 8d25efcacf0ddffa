//! Pair and triple correlation of the hardcore renewal process.
//!
//! With headways `c + Exp(μ)`, the pair correlation at separation `d` in
//! `[kc, (k+1)c)` is the branch
//!
//! `ρ_k(d) = λ Σ_{j=1}^{k} μ^j (d − jc)^(j−1) e^(−μ(d − jc)) / Γ(j)`,
//!
//! i.e. `λ` times the renewal density. Branches are evaluated exactly up to
//! [`K_MAX`] and replaced by their limit `λ²` beyond it.

use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioParams;
use crate::specfun::{ln_gamma, CompensatedSum};
use crate::{Error, Result};

/// Largest branch index evaluated exactly.
pub const K_MAX: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PcfValue {
    pub separation: f64,
    pub value: f64,
    /// `floor(separation / c)`; zero for a Poisson process.
    pub branch_index: u64,
    /// Set when the value is the `λ²` limit rather than an exact branch.
    pub truncated: bool,
}

/// `ρ_k(d)`; zero outside `[kc, (k+1)c)`.
pub fn pcf_branch(k: u64, d: f64, p: &ScenarioParams) -> f64 {
    let c = p.c();
    let kf = k as f64;
    if k == 0 || !(d >= kf * c && d < (kf + 1.0) * c) {
        return 0.0;
    }
    p.lambda() * renewal_density(k, d, p)
}

/// The branch-`k` formula without the range check, for integrating over
/// a closed window `[kc, (k+1)c]`.
pub(crate) fn branch_formula(k: u64, d: f64, p: &ScenarioParams) -> f64 {
    p.lambda() * renewal_density(k, d, p)
}

/// `Σ_{j=1}^{k} μ^j t_j^(j−1) e^(−μ t_j) / Γ(j)` with `t_j = d − jc`, in log space.
fn renewal_density(k: u64, d: f64, p: &ScenarioParams) -> f64 {
    let (mu, c) = (p.mu(), p.c());
    if mu == 0.0 {
        return 0.0;
    }
    let ln_mu = mu.ln();
    let mut sum = CompensatedSum::default();
    for j in 1..=k {
        let jf = j as f64;
        let t = d - jf * c;
        if t < 0.0 {
            break;
        }
        let log_term = if j == 1 {
            ln_mu - mu * t
        } else if t == 0.0 {
            continue;
        } else {
            jf * ln_mu + (jf - 1.0) * t.ln() - mu * t - ln_gamma(jf)
        };
        sum.add(log_term.exp());
    }
    sum.value()
}

fn branch_of(d: f64, c: f64) -> u64 {
    let mut k = (d / c).floor().max(0.0);
    // floating division can land one branch off at exact multiples
    if k > 0.0 && d < k * c {
        k -= 1.0;
    } else if d >= (k + 1.0) * c {
        k += 1.0;
    }
    k as u64
}

/// Full pair correlation `ρ^(2)(d)`.
pub fn pcf(d: f64, p: &ScenarioParams) -> PcfValue {
    let lambda2 = p.lambda() * p.lambda();
    if p.is_poisson() {
        return PcfValue { separation: d, value: lambda2, branch_index: 0, truncated: false };
    }
    if d < p.c() {
        return PcfValue { separation: d, value: 0.0, branch_index: 0, truncated: false };
    }
    let k = if (d / p.c()) > (K_MAX + 2) as f64 { K_MAX + 1 } else { branch_of(d, p.c()) };
    if k > K_MAX {
        return PcfValue { separation: d, value: lambda2, branch_index: branch_of(d, p.c()), truncated: true };
    }
    PcfValue { separation: d, value: p.lambda() * renewal_density(k, d, p), branch_index: k, truncated: false }
}

/// Pair correlation with every branch `k ≥ m` replaced by `λ²`.
pub fn pcf_truncated(d: f64, m: u32, p: &ScenarioParams) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("truncation order m = {m} must be >= 2")));
    }
    if d >= m as f64 * p.c() {
        Ok(p.lambda() * p.lambda())
    } else {
        Ok(pcf(d, p).value)
    }
}

/// Third-order intensity of an ordered triple with consecutive gaps `d1`, `d2`.
pub fn rho3(d1: f64, d2: f64, p: &ScenarioParams) -> f64 {
    if p.is_empty() {
        return 0.0;
    }
    pcf(d1, p).value * pcf(d2, p).value / p.lambda()
}
