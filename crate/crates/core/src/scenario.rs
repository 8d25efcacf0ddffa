//! Traffic and radio parameters.
//!
//! Headways are `c + Exp(μ)`, so the vehicle intensity is tied to the free
//! rate by `1/λ = c + 1/μ`. Exactly one of the two rates is supplied and the
//! other one is derived.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// The rate a scenario is specified by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rate {
    /// Vehicle intensity λ (1/m).
    Intensity(f64),
    /// Rate μ of the exponential part of the headway (1/m).
    FreeRate(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    lambda: f64,
    mu: f64,
    c: f64,
    r0: f64,
    eta: f64,
}

impl ScenarioParams {
    pub fn new(rate: Rate, c: f64, r0: f64, eta: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("tracking distance c = {c} must be >= 0")));
        }
        check_radio(r0, eta)?;
        let (lambda, mu) = match rate {
            Rate::Intensity(lambda) => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidParameter(format!("intensity λ = {lambda} must be > 0")));
                }
                if lambda * c >= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "λc = {} must be < 1 (λc = 1 is the lattice regime)",
                        lambda * c
                    )));
                }
                (lambda, lambda / (1.0 - lambda * c))
            }
            Rate::FreeRate(mu) => {
                if !(mu > 0.0 && mu.is_finite()) {
                    return Err(Error::InvalidParameter(format!("free rate μ = {mu} must be > 0")));
                }
                (mu / (1.0 + c * mu), mu)
            }
        };
        Ok(ScenarioParams { lambda, mu, c, r0, eta })
    }

    /// A scenario without vehicles (`λ = μ = 0`). Every moment of it is zero.
    pub fn empty(c: f64, r0: f64, eta: f64) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!("tracking distance c = {c} must be >= 0")));
        }
        check_radio(r0, eta)?;
        Ok(ScenarioParams { lambda: 0.0, mu: 0.0, c, r0, eta })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
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

    /// `λc`, zero for a Poisson process and approaching one for a lattice.
    pub fn lambda_c(&self) -> f64 {
        self.lambda * self.c
    }

    /// `c / r0`.
    pub fn b(&self) -> f64 {
        self.c / self.r0
    }

    /// True for `c = 0`, where the process is Poisson.
    pub fn is_poisson(&self) -> bool {
        self.c == 0.0
    }

    pub fn is_empty(&self) -> bool {
        self.lambda == 0.0
    }

    /// The Poisson process with the same intensity and radio parameters.
    pub fn poisson_equivalent(&self) -> ScenarioParams {
        ScenarioParams { lambda: self.lambda, mu: self.lambda, c: 0.0, ..*self }
    }

    pub fn pathloss(&self) -> Pathloss {
        Pathloss::unchecked(self.r0, self.eta)
    }
}

/// Shorthand for [`ScenarioParams::new`].
pub fn make_scenario(rate: Rate, c: f64, r0: f64, eta: f64) -> Result<ScenarioParams> {
    ScenarioParams::new(rate, c, r0, eta)
}

fn check_radio(r0: f64, eta: f64) -> Result<()> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!("cell radius r0 = {r0} must be > 0")));
    }
    if !(eta >= 2.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("pathloss exponent η = {eta} must be >= 2")));
    }
    Ok(())
}

/// Distance pathloss `g(r) = |r|^-η` outside the cell `[-r0, r0]`, zero inside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pathloss {
    r0: f64,
    eta: f64,
    int_eta: Option<i32>,
}

impl Pathloss {
    pub fn new(r0: f64, eta: f64) -> Result<Self> {
        check_radio(r0, eta)?;
        Ok(Self::unchecked(r0, eta))
    }

    pub(crate) fn unchecked(r0: f64, eta: f64) -> Self {
        let int_eta = (eta.fract() == 0.0 && eta.abs() < 64.0).then_some(eta as i32);
        Pathloss { r0, eta, int_eta }
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `g(r)`. A vehicle exactly on the cell border is served, so `g(±r0) = 0`.
    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        let d = r.abs();
        if d <= self.r0 {
            0.0
        } else {
            self.decay(d)
        }
    }

    /// `d^-η` without the cell cut-off.
    #[inline]
    pub(crate) fn decay(&self, d: f64) -> f64 {
        match self.int_eta {
            Some(n) => d.powi(-n),
            None => d.powf(-self.eta),
        }
    }

    /// `∫_lo^hi g(y)^n dy` in closed form. Either bound may be infinite.
    pub fn integral_power(&self, n: u32, lo: f64, hi: f64) -> f64 {
        if !(hi > lo) {
            return 0.0;
        }
        let p = n as f64 * self.eta;
        // antiderivative of d^-p on [a, b] with r0 <= a <= b <= ∞
        let piece = |a: f64, b: f64| -> f64 {
            if b <= a {
                return 0.0;
            }
            let upper = if b.is_infinite() { 0.0 } else { b.powf(1.0 - p) };
            (a.powf(1.0 - p) - upper) / (p - 1.0)
        };
        let right = piece(lo.max(self.r0), hi);
        // mirror the negative side onto the positive axis
        let left = piece((-hi).max(self.r0), -lo);
        right + left
    }
}

/// Small-scale fading applied to each link's received power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FadingModel {
    /// Power gain `h ~ Exp(1)`.
    RayleighUnitMean,
    /// `h = 1`.
    None,
}

impl FadingModel {
    /// `E{h^n}`.
    pub fn moment(&self, n: u32) -> f64 {
        match self {
            FadingModel::RayleighUnitMean => (1..=n).map(f64::from).product(),
            FadingModel::None => 1.0,
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingModel::RayleighUnitMean => rng.sample(Exp1),
            FadingModel::None => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derives_free_rate_from_intensity() {
        let p = make_scenario(Rate::Intensity(0.1), 4.0, 100.0, 3.0).unwrap();
        assert!(rel(p.mu(), 1.0 / 6.0) < 1e-12);
        let p = make_scenario(Rate::Intensity(0.1), 0.0, 100.0, 3.0).unwrap();
        assert_eq!(p.mu(), 0.1);
        assert!(p.is_poisson());
    }

    #[test]
    fn rejects_lattice_and_bad_radio() {
        assert!(make_scenario(Rate::Intensity(0.1), 10.0, 100.0, 3.0).is_err());
        assert!(make_scenario(Rate::Intensity(0.1), 12.0, 100.0, 3.0).is_err());
        assert!(make_scenario(Rate::Intensity(0.1), 4.0, 100.0, 1.5).is_err());
        assert!(make_scenario(Rate::Intensity(0.1), 4.0, 0.0, 3.0).is_err());
        assert!(make_scenario(Rate::Intensity(0.1), 4.0, -5.0, 3.0).is_err());
        assert!(make_scenario(Rate::Intensity(0.0), 4.0, 100.0, 3.0).is_err());
        assert!(make_scenario(Rate::FreeRate(-1.0), 4.0, 100.0, 3.0).is_err());
        assert!(make_scenario(Rate::Intensity(0.1), -1.0, 100.0, 3.0).is_err());
    }

    #[test]
    fn pathloss_examples() {
        let g = Pathloss::new(100.0, 3.0).unwrap();
        assert!(rel(g.eval(200.0), 1.25e-7) < 1e-15);
        assert!(rel(g.eval(-200.0), 1.25e-7) < 1e-15);
        assert_eq!(g.eval(50.0), 0.0);
        assert_eq!(g.eval(100.0), 0.0);
        assert_eq!(g.eval(-100.0), 0.0);
        let g = Pathloss::new(100.0, 2.5).unwrap();
        assert!(rel(g.eval(400.0), 400f64.powf(-2.5)) < 1e-15);
    }

    #[test]
    fn pathloss_integrals() {
        let g = Pathloss::new(100.0, 3.0).unwrap();
        // whole line: 2 r0^-2 / 2
        assert!(rel(g.integral_power(1, f64::NEG_INFINITY, f64::INFINITY), 1e-4) < 1e-14);
        assert!(rel(g.integral_power(2, 100.0, f64::INFINITY), 1e-10 / 5.0) < 1e-14);
        // only the negative side contributes
        assert!(rel(g.integral_power(1, f64::NEG_INFINITY, 50.0), 0.5e-4) < 1e-14);
        assert_eq!(g.integral_power(1, -80.0, 90.0), 0.0);
        let expect = (200f64.powi(-2) - 300f64.powi(-2)) / 2.0;
        assert!(rel(g.integral_power(1, -300.0, -200.0), expect) < 1e-14);
        assert!(rel(g.integral_power(1, 150.0, 300.0), (150f64.powi(-2) - 300f64.powi(-2)) / 2.0) < 1e-14);
    }

    #[test]
    fn fading_moments() {
        assert_eq!(FadingModel::RayleighUnitMean.moment(1), 1.0);
        assert_eq!(FadingModel::RayleighUnitMean.moment(2), 2.0);
        assert_eq!(FadingModel::RayleighUnitMean.moment(3), 6.0);
        assert_eq!(FadingModel::None.moment(3), 1.0);
    }

    proptest! {
        #[test]
        fn rate_round_trip(lambda in 1e-3f64..1.0, frac in 0.0f64..0.99, r0 in 1.0f64..1e3, eta in 2.0f64..6.0) {
            let c = frac / lambda;
            let p = make_scenario(Rate::Intensity(lambda), c, r0, eta).unwrap();
            let back = make_scenario(Rate::FreeRate(p.mu()), c, r0, eta).unwrap();
            prop_assert!(rel(back.lambda(), lambda) <= 1e-12);
        }

        #[test]
        fn pathloss_even_and_decreasing(r in 100.0f64..1e5, dr in 1e-3f64..1e3, eta in 2.0f64..6.0) {
            let g = Pathloss::new(100.0, eta).unwrap();
            prop_assert_eq!(g.eval(r), g.eval(-r));
            prop_assert!(g.eval(r + dr) < g.eval(r) || r <= 100.0);
        }
    }
}
