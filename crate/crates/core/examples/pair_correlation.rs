//! Pair correlation of the hardcore headway process.
//!
//! Prints ρ(d)/λ² across the first few exclusion intervals for a dense and a
//! sparse traffic state, then checks the triple density factorisation.
//!
//!     cargo run --example pair_correlation

use hardcore_interference::pcf::{pcf, rho3};
use hardcore_interference::scenario::{make_scenario, Rate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (lambda, c) in [(0.1, 4.0), (0.1, 8.0), (0.025, 16.0)] {
        let p = make_scenario(Rate::Intensity(lambda), c, 100.0, 3.0)?;
        println!("λ = {lambda}, c = {c}, μ = {:.4}, λc = {}", p.mu(), p.lambda_c());
        println!("  {:>8} {:>10} {:>6}", "d/c", "ρ/λ²", "branch");
        for i in 0..=24 {
            let d = c * i as f64 * 0.25;
            let v = pcf(d, &p);
            println!("  {:>8.2} {:>10.5} {:>6}", d / c, v.value / (lambda * lambda), v.branch_index);
        }
    }

    let p = make_scenario(Rate::Intensity(0.1), 4.0, 100.0, 3.0)?;
    let (d1, d2) = (5.0, 9.0);
    println!("ρ3({d1}, {d2}) = {:.6e}", rho3(d1, d2, &p));
    println!("ρ({d1}) ρ({d2}) / λ = {:.6e}", pcf(d1, &p).value * pcf(d2, &p).value / p.lambda());
    Ok(())
}
