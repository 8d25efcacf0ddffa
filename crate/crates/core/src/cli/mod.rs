//! Command-line front end: parameter grids, figure recipes, CSV/JSON output.
//!
//! Grid axes accept a single value, a comma list, or `from:to:steps`. Every
//! file written with `--out` gets a sibling `<out>.manifest.json`; passing
//! that manifest back through `--config` reproduces the file byte for byte.
//!
//! Exit codes: 0 success, 2 some grid points skipped, 1 failure.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::closedform::{self, Variant};
use crate::lattice::{self, LatticeParams};
use crate::moments::{mean_interference, moment_set, second_moment};
use crate::pcf::pcf;
use crate::scenario::{make_scenario, Rate, ScenarioParams};
use crate::simulate::{self, Model, SimConfig, Target};
use crate::specfun::{integrate_finite, QuadratureSpec};
use crate::validity::{join, lattice_flags};
use crate::{Error, Result};

pub use config::{Axis, CommandKind, ConfigFile, Recipe, Settings, SimKind};
pub use output::{Cell, Format, RunManifest, Table};

use config::required;

#[derive(Debug, Parser)]
#[command(name = "hcinterf", version, about = "Interference moments of 1D hardcore vehicular networks")]
pub struct Cli {
    /// Seed of the Monte Carlo streams.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo runs per grid point.
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    /// Output file; a manifest is written next to it. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// JSON settings file, or a manifest to replay.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Relative tolerance of the outer quadratures.
    #[arg(long, global = true)]
    pub quad_rel_tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean, standard deviation and skewness by numerical integration.
    Moments {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        moments: MomentArgs,
    },
    /// Closed-form variance approximations with reference lines.
    Closedform {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        closed: ClosedArgs,
    },
    /// Lattice variance: integration, ε = 0 integration, approximation and the half-intensity PPP.
    Lattice {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Monte Carlo estimates.
    Simulate {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Run a named figure recipe; `figure list` shows them. Flags override recipe fields.
    Figure {
        name: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        moments: MomentArgs,
        #[command(flatten)]
        closed: ClosedArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Intensity λ [1/m].
    #[arg(long)]
    pub lambda: Option<Axis>,
    /// Rate μ of the exponential part of the headway [1/m].
    #[arg(long, conflicts_with = "lambda")]
    pub mu: Option<Axis>,
    /// Tracking distance (or lattice spacing) c [m].
    #[arg(long)]
    pub c: Option<Axis>,
    /// Cell radius r0 [m].
    #[arg(long)]
    pub r0: Option<Axis>,
    /// Pathloss exponent η.
    #[arg(long)]
    pub eta: Option<Axis>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct MomentArgs {
    /// Pair correlation kept exactly up to separation m·c.
    #[arg(long)]
    pub m: Option<u32>,
    /// Also compute the third moment and skewness.
    #[arg(long)]
    pub third: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ClosedArgs {
    /// Variants to emit: closed, order2, order2_m3, exponential, cov.
    #[arg(long = "variant", value_delimiter = ',', value_parser = parse_variant)]
    pub variants: Vec<Variant>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// hardcore, ppp or lattice.
    #[arg(long, value_parser = parse_model)]
    pub model: Option<Model>,
    #[arg(long, value_enum)]
    pub kind: Option<SimKind>,
    /// Lane counts for `--kind lanes`.
    #[arg(long, value_delimiter = ',')]
    pub lanes: Vec<usize>,
    /// Half length of the simulated segment [m].
    #[arg(long)]
    pub half_length: Option<f64>,
    /// Histogram bin width for `--kind pcf` [m].
    #[arg(long)]
    pub bin_width: Option<f64>,
    /// Largest separation for `--kind pcf` [m].
    #[arg(long)]
    pub max_separation: Option<f64>,
    /// Right end of the CDF table for `--kind lanes` [m]; defaults to 3/λ.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub cdf_points: Option<usize>,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    Variant::parse(s).map_err(|e| e.to_string())
}

fn parse_model(s: &str) -> std::result::Result<Model, String> {
    match s {
        "hardcore" => Ok(Model::Hardcore),
        "ppp" => Ok(Model::Ppp),
        "lattice" => Ok(Model::Lattice),
        _ => Err(format!("unknown model `{s}` (hardcore, ppp, lattice)")),
    }
}

impl GridArgs {
    fn settings(&self) -> Settings {
        Settings {
            lambda: self.lambda.clone(),
            mu: self.mu.clone(),
            c: self.c.clone(),
            r0: self.r0.clone(),
            eta: self.eta.clone(),
            ..Default::default()
        }
    }
}

impl Cli {
    /// The flag layer: everything given on the command line.
    fn flag_settings(&self) -> Settings {
        let mut s = match &self.command {
            Command::Moments { grid, moments } => moments.apply(grid.settings()),
            Command::Closedform { grid, closed } => closed.apply(grid.settings()),
            Command::Lattice { grid } => grid.settings(),
            Command::Simulate { grid, sim } => sim.apply(grid.settings()),
            Command::Figure { grid, moments, closed, sim, .. } => {
                sim.apply(closed.apply(moments.apply(grid.settings())))
            }
        };
        s.seed = self.seed;
        s.runs = self.runs;
        s.quad_rel_tol = self.quad_rel_tol;
        s
    }
}

impl MomentArgs {
    fn apply(&self, mut s: Settings) -> Settings {
        s.m = self.m;
        s.third = self.third.then_some(true);
        s
    }
}

impl ClosedArgs {
    fn apply(&self, mut s: Settings) -> Settings {
        s.variants = (!self.variants.is_empty()).then(|| self.variants.clone());
        s
    }
}

impl SimArgs {
    fn apply(&self, mut s: Settings) -> Settings {
        s.model = self.model;
        s.kind = self.kind;
        s.lanes = (!self.lanes.is_empty()).then(|| self.lanes.clone());
        s.half_length = self.half_length;
        s.bin_width = self.bin_width;
        s.max_separation = self.max_separation;
        s.x_max = self.x_max;
        s.cdf_points = self.cdf_points;
        s
    }
}

/// A fully resolved run: the command and its settings, one entry per grid part.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub command: CommandKind,
    pub recipe: Option<String>,
    pub parts: Vec<Settings>,
}

impl Job {
    /// Layers recipe, config file and flags, then fills defaults.
    pub fn resolve(cli: &Cli) -> Result<Job> {
        let (command, recipe, mut parts) = match &cli.command {
            Command::Moments { .. } => (CommandKind::Moments, None, vec![Settings::default()]),
            Command::Closedform { .. } => (CommandKind::Closedform, None, vec![Settings::default()]),
            Command::Lattice { .. } => (CommandKind::Lattice, None, vec![Settings::default()]),
            Command::Simulate { .. } => (CommandKind::Simulate, None, vec![Settings::default()]),
            Command::Figure { name, .. } => {
                let r = config::recipe(name)?;
                (r.command, Some(name.clone()), r.layers())
            }
        };
        if let Some(path) = &cli.config {
            match ConfigFile::load(path)? {
                ConfigFile::Layer(file) => parts = parts.iter().map(|p| p.overlay(&file)).collect(),
                ConfigFile::Replay { command: replayed, parts: replay } => {
                    if replayed != command {
                        return Err(Error::Inconsistent(format!(
                            "manifest was written by `{replayed}`, not `{command}`"
                        )));
                    }
                    parts = replay;
                }
            }
        }
        let flags = cli.flag_settings();
        let parts = parts.iter().map(|p| p.overlay(&flags).with_defaults(command)).collect();
        Ok(Job { command, recipe, parts })
    }
}

/// Output of a job: the table and the grid points that were skipped.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub table: Table,
    pub skipped: Vec<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match (self.table.rows.is_empty(), self.skipped.is_empty()) {
            (_, true) => 0,
            (false, false) => 2,
            (true, false) => 1,
        }
    }
}

/// One grid point, still unvalidated.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    rate: Option<Rate>,
    c: f64,
    r0: f64,
    eta: f64,
}

impl Point {
    fn describe(&self) -> String {
        let rate = match self.rate {
            Some(Rate::Intensity(l)) => format!("lambda={l} "),
            Some(Rate::FreeRate(m)) => format!("mu={m} "),
            None => String::new(),
        };
        format!("{rate}c={} r0={} eta={}", self.c, self.r0, self.eta)
    }

    fn scenario(&self) -> Result<ScenarioParams> {
        let rate = self.rate.ok_or_else(|| Error::InvalidParameter("`lambda` or `mu` is not set".into()))?;
        make_scenario(rate, self.c, self.r0, self.eta)
    }

    fn lattice(&self) -> Result<LatticeParams> {
        LatticeParams::new(self.c, self.r0, self.eta)
    }
}

/// Grid order: η, then r0, then c, then the rate innermost.
fn grid(s: &Settings, needs_rate: bool) -> Result<Vec<Point>> {
    let rates: Vec<Option<Rate>> = match (&s.lambda, &s.mu) {
        (Some(_), Some(_)) => return Err(Error::InvalidParameter("set either `lambda` or `mu`, not both".into())),
        (Some(l), None) => l.values()?.into_iter().map(|v| Some(Rate::Intensity(v))).collect(),
        (None, Some(m)) => m.values()?.into_iter().map(|v| Some(Rate::FreeRate(v))).collect(),
        (None, None) if needs_rate => {
            return Err(Error::InvalidParameter("`lambda` or `mu` is not set".into()));
        }
        (None, None) => vec![None],
    };
    let cs = required(&s.c, "c")?.values()?;
    let r0s = required(&s.r0, "r0")?.values()?;
    let etas = required(&s.eta, "eta")?.values()?;
    let mut points = Vec::with_capacity(rates.len() * cs.len() * r0s.len() * etas.len());
    for &eta in &etas {
        for &r0 in &r0s {
            for &c in &cs {
                for &rate in &rates {
                    points.push(Point { rate, c, r0, eta });
                }
            }
        }
    }
    Ok(points)
}

fn quad_spec(s: &Settings) -> Result<QuadratureSpec> {
    QuadratureSpec::with_rel_tol(*required(&s.quad_rel_tol, "quad_rel_tol")?)
}

fn sim_config(s: &Settings) -> Result<SimConfig> {
    let mut cfg = SimConfig::new(*required(&s.runs, "runs")?, *required(&s.seed, "seed")?)
        .with_half_length(*required(&s.half_length, "half_length")?)
        .with_fading(*required(&s.fading, "fading")?);
    cfg.burn_in = s.burn_in;
    Ok(cfg)
}

fn opt_mu(p: &ScenarioParams) -> Cell {
    if p.is_poisson() {
        Cell::Empty
    } else {
        Cell::Num(p.mu())
    }
}

fn sqrt_opt(v: f64) -> Cell {
    if v >= 0.0 {
        Cell::Num(v.sqrt())
    } else {
        Cell::Empty
    }
}

pub const MOMENT_COLUMNS: [&str; 13] =
    ["lambda", "mu", "c", "r0", "eta", "m", "mean", "variance", "std", "cov", "skewness", "method", "flags"];

fn moments_point(pt: &Point, s: &Settings) -> Result<Table> {
    let p = pt.scenario()?;
    let m = *required(&s.m, "m")?;
    let third = *required(&s.third, "third")?;
    let ms = moment_set(&p, m, third, &quad_spec(s)?)?;
    let mut t = Table::new(MOMENT_COLUMNS);
    t.push(
        vec![
            Cell::Num(p.lambda()),
            opt_mu(&p),
            Cell::Num(p.c()),
            Cell::Num(p.r0()),
            Cell::Num(p.eta()),
            Cell::Int(m.into()),
            Cell::Num(ms.mean),
            Cell::Num(ms.variance),
            Cell::Num(ms.std_dev),
            Cell::opt(ms.coeff_variation),
            Cell::opt(ms.skewness),
            Cell::Text(ms.method.to_string()),
            Cell::Text(join(&ms.flags)),
        ],
        ms.method.to_string(),
    );
    Ok(t)
}

fn variant_column(v: Variant) -> String {
    match v {
        Variant::Cov => "cov_approx".to_string(),
        v => format!("std_{}", v.as_str()),
    }
}

pub fn closedform_columns(variants: &[Variant]) -> Vec<String> {
    let mut cols: Vec<String> = ["lambda", "mu", "c", "r0", "eta"].map(String::from).to_vec();
    cols.extend(variants.iter().map(|&v| variant_column(v)));
    cols.extend(["std_quadrature_m2", "std_quadrature_m4", "std_ppp", "std_lattice", "flags"].map(String::from));
    cols
}

fn closedform_point(pt: &Point, s: &Settings) -> Result<Table> {
    let p = pt.scenario()?;
    let q = quad_spec(s)?;
    let variants = required(&s.variants, "variants")?;
    let mut row = vec![Cell::Num(p.lambda()), opt_mu(&p), Cell::Num(p.c()), Cell::Num(p.r0()), Cell::Num(p.eta())];
    for v in variants {
        let value = v.eval(&p)?;
        row.push(if *v == Variant::Cov { Cell::Num(value) } else { sqrt_opt(value) });
    }
    let mean = mean_interference(&p);
    row.push(sqrt_opt(second_moment(&p, 2, &q)? - mean * mean));
    row.push(sqrt_opt(second_moment(&p, 4, &q)? - mean * mean));
    row.push(sqrt_opt(closedform::ppp_variance(&p)));
    row.push(if p.is_empty() {
        Cell::Empty
    } else {
        let l = LatticeParams::new(1.0 / p.lambda(), p.r0(), p.eta())?;
        sqrt_opt(lattice::lattice_variance(&l, &q)?)
    });
    row.push(Cell::Text(join(&closedform::flags(&p))));
    let mut t = Table::new(closedform_columns(variants));
    t.push(row, "ClosedForm");
    Ok(t)
}

pub const LATTICE_COLUMNS: [&str; 11] = [
    "c",
    "r0",
    "eta",
    "q",
    "epsilon",
    "mean",
    "std_integration",
    "std_integration_eps0",
    "std_approx",
    "std_ppp_half",
    "flags",
];

fn lattice_point(pt: &Point, s: &Settings) -> Result<Table> {
    let p = pt.lattice()?;
    let q = quad_spec(s)?;
    let mut t = Table::new(LATTICE_COLUMNS);
    t.push(
        vec![
            Cell::Num(p.c()),
            Cell::Num(p.r0()),
            Cell::Num(p.eta()),
            Cell::Num(p.q()),
            Cell::Num(p.epsilon()),
            Cell::Num(lattice::lattice_mean(&p)?),
            sqrt_opt(lattice::lattice_variance(&p, &q)?),
            sqrt_opt(lattice::lattice_variance_eps0(&p, &q)?),
            sqrt_opt(lattice::lattice_variance_approx(&p)),
            sqrt_opt(lattice::half_intensity_ppp_variance(&p)),
            Cell::Text(join(&lattice_flags(&p))),
        ],
        "LatticeIntegration",
    );
    Ok(t)
}

pub const SIM_MOMENT_COLUMNS: [&str; 16] = [
    "model",
    "lambda",
    "mu",
    "c",
    "r0",
    "eta",
    "runs",
    "seed",
    "mean",
    "mean_se",
    "variance",
    "variance_se",
    "std",
    "std_se",
    "skewness",
    "skewness_se",
];

pub const LANE_COLUMNS: [&str; 7] = ["lambda", "c", "n_lanes", "x", "empirical_cdf", "reference_cdf", "sup_norm"];

pub const PCF_COLUMNS: [&str; 8] = ["lambda", "mu", "c", "lo", "hi", "density", "std_error", "analytic"];

fn simulate_point(pt: &Point, s: &Settings) -> Result<Table> {
    let cfg = sim_config(s)?;
    let model = *required(&s.model, "model")?;
    match *required(&s.kind, "kind")? {
        SimKind::Moments => {
            let target = match model {
                Model::Hardcore => Target::Renewal(pt.scenario()?),
                Model::Ppp => Target::Renewal(pt.scenario()?.poisson_equivalent()),
                Model::Lattice => Target::Lattice(pt.lattice()?),
            };
            let est = simulate::estimate_moments(&target, &cfg)?;
            let (lambda, mu, c) = match target {
                Target::Renewal(p) => (p.lambda(), opt_mu(&p), p.c()),
                Target::Lattice(l) => (l.lambda(), Cell::Empty, l.c()),
            };
            let mut t = Table::new(SIM_MOMENT_COLUMNS);
            t.push(
                vec![
                    Cell::Text(est.model.as_str().into()),
                    Cell::Num(lambda),
                    mu,
                    Cell::Num(c),
                    Cell::Num(pt.r0),
                    Cell::Num(pt.eta),
                    Cell::Int(cfg.runs as u64),
                    Cell::Int(cfg.seed),
                    Cell::Num(est.mean.value),
                    Cell::Num(est.mean.std_error),
                    Cell::Num(est.variance.value),
                    Cell::Num(est.variance.std_error),
                    Cell::Num(est.std_dev.value),
                    Cell::Num(est.std_dev.std_error),
                    Cell::Num(est.skewness.value),
                    Cell::Num(est.skewness.std_error),
                ],
                "MonteCarlo",
            );
            Ok(t)
        }
        SimKind::Lanes => {
            let p = renewal_only(model, pt)?;
            let points = *required(&s.cdf_points, "cdf_points")?;
            let x_max = s.x_max.unwrap_or(3.0 / p.lambda());
            let mut t = Table::new(LANE_COLUMNS);
            for &n in required(&s.lanes, "lanes")? {
                let cdf = simulate::lane_superposition_cdf(&p, n, &cfg)?;
                for (x, emp, reference) in cdf.table(x_max, points) {
                    t.push(
                        vec![
                            Cell::Num(p.lambda()),
                            Cell::Num(p.c()),
                            Cell::Int(n as u64),
                            Cell::Num(x),
                            Cell::Num(emp),
                            Cell::Num(reference),
                            Cell::Num(cdf.sup_norm),
                        ],
                        "MonteCarlo",
                    );
                }
            }
            Ok(t)
        }
        SimKind::Pcf => {
            let p = renewal_only(model, pt)?;
            let q = quad_spec(s)?;
            let bins = simulate::pcf_histogram(
                &p,
                &cfg,
                *required(&s.bin_width, "bin_width")?,
                *required(&s.max_separation, "max_separation")?,
            )?;
            let mut t = Table::new(PCF_COLUMNS);
            for b in bins {
                let analytic = integrate_finite(|d| pcf(d, &p).value, b.lo, b.hi, &q)?.value / (b.hi - b.lo);
                t.push(
                    vec![
                        Cell::Num(p.lambda()),
                        opt_mu(&p),
                        Cell::Num(p.c()),
                        Cell::Num(b.lo),
                        Cell::Num(b.hi),
                        Cell::Num(b.value),
                        Cell::Num(b.std_error),
                        Cell::Num(analytic),
                    ],
                    "MonteCarlo",
                );
            }
            Ok(t)
        }
    }
}

fn renewal_only(model: Model, pt: &Point) -> Result<ScenarioParams> {
    match model {
        Model::Hardcore => pt.scenario(),
        Model::Ppp => Ok(pt.scenario()?.poisson_equivalent()),
        Model::Lattice => Err(Error::InvalidParameter("lanes and pcf outputs need a renewal model".into())),
    }
}

fn empty_table(command: CommandKind, first: &Settings) -> Table {
    match command {
        CommandKind::Moments => Table::new(MOMENT_COLUMNS),
        CommandKind::Closedform => Table::new(closedform_columns(first.variants.as_deref().unwrap_or(&Variant::ALL))),
        CommandKind::Lattice => Table::new(LATTICE_COLUMNS),
        CommandKind::Simulate => match first.kind.unwrap_or(SimKind::Moments) {
            SimKind::Moments => Table::new(SIM_MOMENT_COLUMNS),
            SimKind::Lanes => Table::new(LANE_COLUMNS),
            SimKind::Pcf => Table::new(PCF_COLUMNS),
        },
    }
}

/// Evaluates every grid point of `job` on the worker pool; rows come back in grid order.
pub fn execute(job: &Job) -> Result<RunReport> {
    let first = job.parts.first().ok_or_else(|| Error::InvalidParameter("no grid parts".into()))?;
    let mut table = empty_table(job.command, first);
    let needs_rate = match job.command {
        CommandKind::Lattice => false,
        CommandKind::Simulate => first.model != Some(Model::Lattice),
        _ => true,
    };
    let mut work: Vec<(Point, &Settings)> = Vec::new();
    for part in &job.parts {
        if job.command == CommandKind::Lattice && (part.lambda.is_some() || part.mu.is_some()) {
            return Err(Error::InvalidParameter("lattice grids take c, r0 and eta only".into()));
        }
        if job.command == CommandKind::Simulate && part.kind != first.kind {
            return Err(Error::Inconsistent("all parts of a simulate run must share `kind`".into()));
        }
        work.extend(grid(part, needs_rate)?.into_iter().map(|pt| (pt, part)));
    }
    let results: Vec<Result<Table>> = work
        .par_iter()
        .map(|(pt, s)| match job.command {
            CommandKind::Moments => moments_point(pt, s),
            CommandKind::Closedform => closedform_point(pt, s),
            CommandKind::Lattice => lattice_point(pt, s),
            CommandKind::Simulate => simulate_point(pt, s),
        })
        .collect();
    let mut skipped = Vec::new();
    for ((pt, _), r) in work.iter().zip(results) {
        match r {
            Ok(t) if t.columns == table.columns => table.append(t),
            Ok(_) => return Err(Error::Inconsistent("grid parts disagree on output columns".into())),
            Err(e) => skipped.push(format!("{}: {e}", pt.describe())),
        }
    }
    Ok(RunReport { table, skipped })
}

/// Parses `args`, runs, writes the output and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if let Command::Figure { name, .. } = &cli.command {
        if name == "list" {
            let mut out = std::io::stdout().lock();
            for (name, r) in config::recipes() {
                // a closed pipe (`| head`) is not an error
                if writeln!(out, "{name:<6} {:<10} {}", r.command.to_string(), r.description).is_err() {
                    break;
                }
            }
            return 0;
        }
    }
    let command_line = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match run_cli(&cli, command_line) {
        Ok(report) => {
            for s in &report.skipped {
                eprintln!("skipped {s}");
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Resolves, executes and writes one invocation.
pub fn run_cli(cli: &Cli, command_line: Vec<String>) -> Result<RunReport> {
    let job = Job::resolve(cli)?;
    let report = execute(&job)?;
    match &cli.out {
        Some(path) => {
            let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
            report.table.write(cli.format, &mut f)?;
            f.flush()?;
            let manifest = RunManifest {
                tool: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                recipe_version: config::recipe_version(),
                command_line,
                command: job.command,
                recipe: job.recipe.clone(),
                format: cli.format,
                seed: job.parts.first().and_then(|p| p.seed),
                parts: job.parts.clone(),
                timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
                rows: report.table.rows.len(),
                skipped: report.skipped.clone(),
                method_tags: report.table.methods.clone(),
            };
            manifest.write(&RunManifest::path_for(path))?;
        }
        None => {
            let stdout = std::io::stdout();
            report.table.write(cli.format, stdout.lock())?;
        }
    }
    Ok(report)
}
