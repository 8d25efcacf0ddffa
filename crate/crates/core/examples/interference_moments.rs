//! Mean, variance and skewness of the interference at the cell edge by
//! numerical integration, with the Poisson process for comparison.
//!
//!     cargo run --release --example interference_moments

use hardcore_interference::moments::moment_set;
use hardcore_interference::scenario::{make_scenario, Rate};
use hardcore_interference::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureSpec::default();
    println!("{:>5} {:>5} {:>12} {:>12} {:>8} {:>8} {:>10}", "λ", "c", "mean", "std", "cov", "skew", "std/ppp");
    for lambda in [0.025, 0.1] {
        for c in [0.5, 2.0, 4.0, 6.0, 8.0] {
            if lambda * c >= 1.0 {
                continue;
            }
            let p = make_scenario(Rate::Intensity(lambda), c, 100.0, 3.0)?;
            let hc = moment_set(&p, 2, true, &q)?;
            let ppp = moment_set(&p.poisson_equivalent(), 2, false, &q)?;
            println!(
                "{lambda:>5} {c:>5} {:>12.4e} {:>12.4e} {:>8.4} {:>8.4} {:>10.4}",
                hc.mean,
                hc.std_dev,
                hc.coeff_variation.unwrap_or(f64::NAN),
                hc.skewness.unwrap_or(f64::NAN),
                hc.std_dev / ppp.std_dev
            );
        }
    }

    // longer pair-correlation truncation for dense traffic
    let p = make_scenario(Rate::Intensity(0.1), 6.0, 100.0, 3.0)?;
    for m in [2, 3, 4, 8] {
        let s = moment_set(&p, m, false, &q)?;
        println!("λc = 0.6, m = {m}: variance {:.10e} [{}]", s.variance, s.method);
    }
    Ok(())
}
