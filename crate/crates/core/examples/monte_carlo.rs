//! Monte Carlo ground truth: moments with batch-means errors, the gap
//! distribution of superposed lanes and a pair-density histogram.
//!
//!     cargo run --release --example monte_carlo

use hardcore_interference::moments::moment_set;
use hardcore_interference::pcf::pcf;
use hardcore_interference::scenario::{make_scenario, Rate};
use hardcore_interference::simulate::{estimate_moments, lane_superposition_cdf, pcf_histogram, SimConfig, Target};
use hardcore_interference::{LatticeParams, QuadratureSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuadratureSpec::default();
    let p = make_scenario(Rate::Intensity(0.1), 4.0, 100.0, 3.0)?;
    let cfg = SimConfig::new(20_000, 7).with_half_length(10_000.0);

    let exact = moment_set(&p, 2, true, &q)?;
    let targets = [
        Target::Renewal(p.poisson_equivalent()),
        Target::Renewal(p),
        Target::Lattice(LatticeParams::new(10.0, 100.0, 3.0)?),
    ];
    for t in &targets {
        let mc = estimate_moments(t, &cfg)?;
        println!(
            "{:<9} mean {:.4e} ± {:.1e}  std {:.4e} ± {:.1e}  skew {:.3} ± {:.3}",
            t.model().as_str(),
            mc.mean.value,
            mc.mean.std_error,
            mc.std_dev.value,
            mc.std_dev.std_error,
            mc.skewness.value,
            mc.skewness.std_error
        );
    }
    println!("quadrature hardcore std {:.4e}, skew {:.3}", exact.std_dev, exact.skewness.unwrap_or(f64::NAN));

    let lanes = make_scenario(Rate::Intensity(0.025), 16.0, 100.0, 3.0)?;
    for n in [1, 2, 4, 8] {
        let cdf = lane_superposition_cdf(&lanes, n, &SimConfig::new(100, 3))?;
        println!("{n} lanes: sup |F - exponential| = {:.4}", cdf.sup_norm);
    }

    let hist = pcf_histogram(&p, &SimConfig::new(200, 5), 1.0, 16.0)?;
    for b in hist {
        let mid = 0.5 * (b.lo + b.hi);
        println!(
            "d ∈ ({:>4}, {:>4}]  ρ̂ = {:.5} ± {:.5}  ρ(mid) = {:.5}",
            b.lo,
            b.hi,
            b.value,
            b.std_error,
            pcf(mid, &p).value
        );
    }
    Ok(())
}
