//! Driving the command-line layer from code: list the bundled recipes, run
//! one into a temporary directory and show its manifest.
//!
//!     cargo run --release --example figure_recipes

use hardcore_interference::cli::{self, config};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, r) in config::recipes() {
        println!("{name:<6} {:<10} {} part(s)  {}", r.command.to_string(), r.layers().len(), r.description);
    }

    let dir = std::env::temp_dir().join("hcinterf-example");
    std::fs::create_dir_all(&dir)?;
    let out = dir.join("fig9.csv");
    let code = cli::run(["hcinterf", "figure", "fig9", "--out", out.to_str().unwrap()]);
    println!("exit code {code}");
    let csv = std::fs::read_to_string(&out)?;
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    let manifest = std::fs::read_to_string(dir.join("fig9.csv.manifest.json"))?;
    println!("{manifest}");

    // the manifest replays the same grid
    let again = dir.join("fig9-replay.csv");
    let manifest_path = dir.join("fig9.csv.manifest.json");
    cli::run(["hcinterf", "lattice", "--config", manifest_path.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    println!("replay identical: {}", std::fs::read_to_string(again)? == csv);
    Ok(())
}
