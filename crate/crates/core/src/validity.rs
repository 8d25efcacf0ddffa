//! Regime flags attached to approximate results.
//!
//! The approximations remain computable outside the regime they were derived
//! for; these flags only mark where their accuracy is known to degrade.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeParams;
use crate::scenario::ScenarioParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValidityFlag {
    /// `λ r0 < 10`: few vehicles per cell, the expansion in `μ(x + c) → ∞` degrades.
    SparseCell,
    /// `λc > 0.4`: small-`λc` expansions degrade.
    LargeLambdaC,
    /// `c / r0 > 0.25`: expansions in `b → 0` degrade.
    LargeB,
    /// `λc > 0.6`: the `m = 2` truncation misses long-range correlation,
    /// the third moment in particular.
    LongRangeCorrelation,
    /// `r0 / c < 5`: large-`q` lattice approximations degrade.
    SmallQ,
}

impl ValidityFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValidityFlag::SparseCell => "sparse_cell",
            ValidityFlag::LargeLambdaC => "large_lambda_c",
            ValidityFlag::LargeB => "large_b",
            ValidityFlag::LongRangeCorrelation => "long_range_correlation",
            ValidityFlag::SmallQ => "small_q",
        }
    }
}

impl fmt::Display for ValidityFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Flags relevant to the closed-form variance approximations.
pub fn closed_form_flags(p: &ScenarioParams) -> Vec<ValidityFlag> {
    let mut flags = Vec::new();
    if p.lambda() * p.r0() < 10.0 {
        flags.push(ValidityFlag::SparseCell);
    }
    if p.lambda_c() > 0.4 {
        flags.push(ValidityFlag::LargeLambdaC);
    }
    if p.b() > 0.25 {
        flags.push(ValidityFlag::LargeB);
    }
    flags
}

/// Flags relevant to the truncated quadrature moments.
pub fn quadrature_flags(p: &ScenarioParams) -> Vec<ValidityFlag> {
    if p.lambda_c() > 0.6 {
        vec![ValidityFlag::LongRangeCorrelation]
    } else {
        Vec::new()
    }
}

pub fn lattice_flags(p: &LatticeParams) -> Vec<ValidityFlag> {
    if p.q() < 5.0 {
        vec![ValidityFlag::SmallQ]
    } else {
        Vec::new()
    }
}

/// `a;b;c`, or empty when there are no flags.
pub fn join(flags: &[ValidityFlag]) -> String {
    flags.iter().map(ValidityFlag::as_str).collect::<Vec<_>>().join(";")
}
