//! Special functions and quadrature used by the analytic modules.
//!
//! Only real arguments are supported, and only the parts of each domain the
//! interference formulas reach: `2F1` on the negative real axis, Hurwitz zeta
//! for `s > 1`, and the upper incomplete gamma function for any real order.

mod gamma;
mod hurwitz;
mod hyp2f1;
mod quad;

pub use gamma::{ln_gamma, upper_incomplete_gamma, upper_incomplete_gamma_scaled};
pub use hurwitz::hurwitz_zeta;
pub use hyp2f1::gauss_2f1;
pub use quad::{
    integrate_finite, integrate_semi_infinite, try_integrate_finite, try_integrate_semi_infinite, QuadratureResult,
    QuadratureSpec,
};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
