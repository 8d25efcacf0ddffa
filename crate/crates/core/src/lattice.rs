//! Interference from a lattice of spacing `c` with uniform random phase.
//!
//! Vehicles sit at `r0 + z + kc`, `k ∈ ℤ`, `z ~ U(0, c)`. With
//! `2r0/c = n + ε`, the nearest vehicle beyond the far cell edge is at
//! offset `z' = (1 − ε)c − z` when `z < (1 − ε)c` and `(2 − ε)c − z`
//! otherwise, so both sides are sums of Hurwitz zeta functions in `z`.
//!
//! The second moment splits into `J1` (single vehicles), `J2` (pairs on the
//! same side) and `J3` (pairs on opposite sides).

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::specfun::{hurwitz_zeta, try_integrate_finite, QuadratureSpec};
use crate::{Error, Result};

/// `2r0/c` closer than this to an integer is treated as `ε = 0`.
const EPS_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    c: f64,
    r0: f64,
    eta: f64,
    q: f64,
    epsilon: f64,
}

impl LatticeParams {
    pub fn new(c: f64, r0: f64, eta: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("lattice spacing c = {c} must be > 0")));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidParameter(format!("cell radius r0 = {r0} must be > 0")));
        }
        if !(eta >= 2.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("pathloss exponent η = {eta} must be >= 2")));
        }
        let ratio = 2.0 * r0 / c;
        let mut epsilon = ratio - ratio.floor();
        if epsilon < EPS_SNAP || 1.0 - epsilon < EPS_SNAP {
            epsilon = 0.0;
        }
        Ok(LatticeParams { c, r0, eta, q: r0 / c, epsilon })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `r0 / c`.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// `frac(2r0 / c)`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Intensity `1/c`.
    pub fn lambda(&self) -> f64 {
        1.0 / self.c
    }

    /// Offset beyond `r0` of the nearest vehicle on the far side, given the
    /// near-side offset `z ∈ [0, c)`.
    pub fn far_offset(&self, z: f64) -> f64 {
        let split = (1.0 - self.epsilon) * self.c;
        if z < split {
            split - z
        } else {
            (2.0 - self.epsilon) * self.c - z
        }
    }
}

/// `ζ(η, a)` memoized per call, since adaptive rules revisit abscissae.
struct ZetaCache {
    s: f64,
    values: RefCell<HashMap<u64, f64>>,
}

impl ZetaCache {
    fn new(s: f64) -> Self {
        ZetaCache { s, values: RefCell::new(HashMap::new()) }
    }

    fn get(&self, a: f64) -> Result<f64> {
        if let Some(&v) = self.values.borrow().get(&a.to_bits()) {
            return Ok(v);
        }
        let v = hurwitz_zeta(self.s, a)?;
        self.values.borrow_mut().insert(a.to_bits(), v);
        Ok(v)
    }
}

/// `E{I} = 2 r0^(1−η) / (c(η − 1))`, checked against its zeta form when `η > 2`.
pub fn lattice_mean(p: &LatticeParams) -> Result<f64> {
    let (c, r0, eta) = (p.c, p.r0, p.eta);
    let simple = 2.0 * r0.powf(1.0 - eta) / (c * (eta - 1.0));
    if eta > 2.0 {
        let zeta =
            2.0 * (hurwitz_zeta(eta - 1.0, p.q)? - hurwitz_zeta(eta - 1.0, 1.0 + p.q)?) / (c.powf(eta) * (eta - 1.0));
        if ((zeta - simple) / simple).abs() > 1e-10 {
            return Err(Error::Inconsistent(format!("lattice mean: zeta form {zeta:e} vs closed form {simple:e}")));
        }
    }
    Ok(simple)
}

/// Single-vehicle term `2λ r0^(1−2η) / (2η − 1)`, checked against its zeta form.
pub fn j1(p: &LatticeParams) -> Result<f64> {
    let (c, r0, eta) = (p.c, p.r0, p.eta);
    let simple = 2.0 * r0.powf(1.0 - 2.0 * eta) / (c * (2.0 * eta - 1.0));
    let s = 2.0 * eta - 1.0;
    let zeta = 2.0 * (hurwitz_zeta(s, p.q)? - hurwitz_zeta(s, 1.0 + p.q)?) / (c.powf(2.0 * eta) * s);
    if ((zeta - simple) / simple).abs() > 1e-10 {
        return Err(Error::Inconsistent(format!("J1: zeta form {zeta:e} vs closed form {simple:e}")));
    }
    Ok(simple)
}

/// Same-side pairs, `2c^(−2η−1) ∫_0^c ζ(η, (r0 + z)/c)² dz`.
pub fn j2(p: &LatticeParams, q: &QuadratureSpec) -> Result<f64> {
    j2_cached(p, q, &ZetaCache::new(p.eta))
}

fn j2_cached(p: &LatticeParams, q: &QuadratureSpec, zeta: &ZetaCache) -> Result<f64> {
    let (c, r0) = (p.c, p.r0);
    let v = try_integrate_finite(
        |z| {
            let a = zeta.get((r0 + z) / c)?;
            Ok(a * a)
        },
        0.0,
        c,
        q,
    )?
    .into_value()?;
    Ok(2.0 * c.powf(-2.0 * p.eta - 1.0) * v)
}

/// Opposite-side pairs at the geometry's `ε`.
pub fn j3(p: &LatticeParams, q: &QuadratureSpec) -> Result<f64> {
    j3_at(p, p.epsilon, q, &ZetaCache::new(p.eta))
}

/// Opposite-side pairs with `ε` forced to zero.
pub fn j3_eps0(p: &LatticeParams, q: &QuadratureSpec) -> Result<f64> {
    j3_at(p, 0.0, q, &ZetaCache::new(p.eta))
}

fn j3_at(p: &LatticeParams, eps: f64, q: &QuadratureSpec, zeta: &ZetaCache) -> Result<f64> {
    let (c, r0) = (p.c, p.r0);
    let split = (1.0 - eps) * c;
    let piece = |lo: f64, hi: f64, shift: f64| -> Result<f64> {
        if hi <= lo {
            return Ok(0.0);
        }
        try_integrate_finite(|z| Ok(zeta.get((r0 + z) / c)? * zeta.get((r0 + shift - z) / c)?), lo, hi, q)?.into_value()
    };
    let v = piece(0.0, split, (1.0 - eps) * c)? + piece(split, c, (2.0 - eps) * c)?;
    Ok(2.0 * c.powf(-2.0 * p.eta - 1.0) * v)
}

/// `Var{I} = J1 + J2 + J3 − E{I}²`.
pub fn lattice_variance(p: &LatticeParams, q: &QuadratureSpec) -> Result<f64> {
    variance_at(p, p.epsilon, q)
}

/// [`lattice_variance`] with the opposite-side term evaluated at `ε = 0`.
pub fn lattice_variance_eps0(p: &LatticeParams, q: &QuadratureSpec) -> Result<f64> {
    variance_at(p, 0.0, q)
}

fn variance_at(p: &LatticeParams, eps: f64, q: &QuadratureSpec) -> Result<f64> {
    let zeta = ZetaCache::new(p.eta);
    let mean = lattice_mean(p)?;
    Ok(j1(p)? + j2_cached(p, q, &zeta)? + j3_at(p, eps, q, &zeta)? - mean * mean)
}

/// Large-`q` approximation `2 r0^(1−2η)/(c(2η − 1)) + ε(1 − ε) r0^-2η`.
pub fn lattice_variance_approx(p: &LatticeParams) -> f64 {
    let (c, r0, eta, eps) = (p.c, p.r0, p.eta, p.epsilon);
    2.0 * r0.powf(1.0 - 2.0 * eta) / (c * (2.0 * eta - 1.0)) + eps * (1.0 - eps) * r0.powf(-2.0 * eta)
}

/// `J3` at `ε = 0` with the lattice sums replaced by integrals:
/// `r0^-2η (c²(η−1)² − 6c(η−1)r0 + 6r0²) / (3c²(η−1)²)`.
pub fn j3_large_q(p: &LatticeParams) -> f64 {
    let (c, r0) = (p.c, p.r0);
    let e1 = p.eta - 1.0;
    r0.powf(-2.0 * p.eta) * (c * c * e1 * e1 - 6.0 * c * e1 * r0 + 6.0 * r0 * r0) / (3.0 * c * c * e1 * e1)
}

/// Variance of the Poisson process of intensity `1/(2c)`, which the lattice
/// variance approaches for large `q` under Rayleigh fading.
pub fn half_intensity_ppp_variance(p: &LatticeParams) -> f64 {
    2.0 * p.r0.powf(1.0 - 2.0 * p.eta) / (p.c * (2.0 * p.eta - 1.0))
}
