//! Interference moments for one-dimensional vehicular networks whose headway
//! distance is a constant tracking distance plus an exponential gap.
//!
//! The crate is organised bottom-up:
//!
//! * [`scenario`] validated traffic/radio parameters and the pathloss law,
//! * [`specfun`] Hurwitz zeta, `2F1`, incomplete gamma and adaptive quadrature,
//! * [`pcf`] pair and triple correlation functions of the hardcore process,
//! * [`moments`] first three interference moments by numerical integration,
//! * [`closedform`] integral-free variance approximations,
//! * [`lattice`] the `λc = 1` lattice limit,
//! * [`simulate`] Monte Carlo ground truth,
//! * [`cli`] grid evaluation, figure recipes and CSV/JSON emission.
//!
//! Runnable walkthroughs for each capability live in the crate's `examples/`.

// `!(x > 0.0)` is how parameter checks reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cli;
pub mod closedform;
mod error;
pub mod lattice;
pub mod moments;
pub mod pcf;
pub mod scenario;
pub mod simulate;
pub mod specfun;
pub mod validity;

pub use error::{Error, Result};
pub use lattice::LatticeParams;
pub use moments::{Method, MomentSet};
pub use scenario::{FadingModel, Pathloss, Rate, ScenarioParams};
pub use specfun::{QuadratureResult, QuadratureSpec};
