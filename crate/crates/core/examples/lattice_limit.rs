//! The λc = 1 lattice limit: exact variance, its ε = 0 simplification and
//! the large-q approximation, against a Poisson process of half the intensity.
//!
//!     cargo run --release --example lattice_limit

use hardcore_interference::lattice::{
    half_intensity_ppp_variance, lattice_mean, lattice_variance, lattice_variance_approx, lattice_variance_eps0,
};
use hardcore_interference::{LatticeParams, QuadratureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureSpec::default();
    println!(
        "{:>5} {:>5} {:>7} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "c", "r0", "ε", "mean", "std", "std(ε=0)", "std approx", "ppp λ/2"
    );
    for r0 in [100.0, 150.0] {
        for c in [2.0, 7.0, 10.0, 20.0, 40.0] {
            let p = LatticeParams::new(c, r0, 3.0)?;
            println!(
                "{c:>5} {r0:>5} {:>7.4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
                p.epsilon(),
                lattice_mean(&p)?,
                lattice_variance(&p, &q)?.sqrt(),
                lattice_variance_eps0(&p, &q)?.sqrt(),
                lattice_variance_approx(&p).sqrt(),
                half_intensity_ppp_variance(&p).sqrt(),
            );
        }
    }
    Ok(())
}
