//! The special functions underneath the moment formulas.
//!
//!     cargo run --example special_functions

use hardcore_interference::specfun::{
    gauss_2f1, hurwitz_zeta, integrate_finite, integrate_semi_infinite, upper_incomplete_gamma, QuadratureSpec,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Hurwitz zeta");
    for (s, a) in [(2.0, 1.0), (3.0, 10.5), (6.0, 0.25)] {
        println!("  ζ({s}, {a}) = {:.15e}", hurwitz_zeta(s, a)?);
    }

    println!("upper incomplete gamma, negative orders");
    for (a, x) in [(-2.5, 0.1), (-2.0, 1.5), (-0.5, 12.0), (-4.0, 0.02)] {
        println!("  Γ({a}, {x}) = {:.15e}", upper_incomplete_gamma(a, x)?);
    }

    println!("Gauss 2F1 on the negative axis");
    for z in [-0.05, -0.5, -4.0] {
        println!("  2F1(3, 5; 6; {z}) = {:.15e}", gauss_2f1(3.0, 5.0, 6.0, z)?);
    }

    let q = QuadratureSpec::default();
    let finite = integrate_finite(|x: f64| x.sin().powi(2), 0.0, std::f64::consts::PI, &q)?;
    println!("∫_0^π sin² = {:.15} (converged: {})", finite.value, finite.converged);
    let tail = integrate_semi_infinite(|x: f64| x.powi(-3) * (-x / 50.0).exp(), 100.0, 3.0, &q)?;
    println!("∫_100^∞ x^-3 e^(-x/50) dx = {:.15e} ± {:.1e}", tail.value, tail.error_estimate);
    Ok(())
}
