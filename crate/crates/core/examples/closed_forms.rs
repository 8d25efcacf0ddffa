//! Integral-free variance approximations next to the quadrature value.
//!
//!     cargo run --release --example closed_forms

use hardcore_interference::closedform::{flags, Variant};
use hardcore_interference::moments::moment_set;
use hardcore_interference::scenario::{make_scenario, Rate};
use hardcore_interference::validity::join;
use hardcore_interference::QuadratureSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureSpec::default();
    for (lambda, r0) in [(0.1, 100.0), (0.025, 150.0)] {
        println!("λ = {lambda}, r0 = {r0}: relative error of each variance form");
        print!("{:>6}", "c");
        for v in Variant::ALL.iter().filter(|v| **v != Variant::Cov) {
            print!(" {:>12}", v.as_str());
        }
        println!(" {:>10}  flags", "cov");
        for c in [1.0, 2.0, 4.0, 6.0, 8.0] {
            let p = make_scenario(Rate::Intensity(lambda), c, r0, 3.0)?;
            let exact = moment_set(&p, 2, false, &q)?;
            print!("{c:>6}");
            for v in Variant::ALL.iter().filter(|v| **v != Variant::Cov) {
                print!(" {:>+12.4}", v.eval(&p)? / exact.variance - 1.0);
            }
            println!(" {:>10.4}  {}", Variant::Cov.eval(&p)?, join(&flags(&p)));
        }
    }
    Ok(())
}
