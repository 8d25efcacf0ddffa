//! Monte Carlo ground truth.
//!
//! Every run draws one deployment on `[-L, L]` and one fading gain per
//! vehicle, then evaluates the interference at the origin. Run `i` uses its
//! own ChaCha8 stream `(seed, i)`, and results are reduced in run order, so
//! estimates are bit-identical whatever the number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::LatticeParams;
use crate::moments::{Method, MomentSet};
use crate::scenario::{FadingModel, Pathloss, ScenarioParams};
use crate::specfun::CompensatedSum;
use crate::{Error, Result};

/// Half of the default 40 km road segment.
pub const DEFAULT_HALF_LENGTH: f64 = 20_000.0;

/// Batches used for batch-means standard errors.
pub const BATCHES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Hardcore,
    Ppp,
    Lattice,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Hardcore => "hardcore",
            Model::Ppp => "ppp",
            Model::Lattice => "lattice",
        }
    }
}

/// What to simulate. A renewal target with `c = 0` is the Poisson process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Target {
    Renewal(ScenarioParams),
    Lattice(LatticeParams),
}

impl Target {
    pub fn model(&self) -> Model {
        match self {
            Target::Renewal(p) if p.is_poisson() => Model::Ppp,
            Target::Renewal(_) => Model::Hardcore,
            Target::Lattice(_) => Model::Lattice,
        }
    }

    pub fn pathloss(&self) -> Pathloss {
        match self {
            Target::Renewal(p) => p.pathloss(),
            Target::Lattice(p) => Pathloss::unchecked(p.r0(), p.eta()),
        }
    }

    /// Margin generated beyond each window edge and discarded,
    /// `max(50/μ, 50c)` for renewal processes.
    pub fn burn_in(&self) -> f64 {
        match self {
            Target::Renewal(p) if p.is_empty() => 0.0,
            Target::Renewal(p) => (50.0 / p.mu()).max(50.0 * p.c()),
            Target::Lattice(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub half_length: f64,
    pub runs: usize,
    pub seed: u64,
    /// Overrides [`Target::burn_in`] when set.
    pub burn_in: Option<f64>,
    pub fading: FadingModel,
}

impl SimConfig {
    pub fn new(runs: usize, seed: u64) -> Self {
        SimConfig { half_length: DEFAULT_HALF_LENGTH, runs, seed, burn_in: None, fading: FadingModel::RayleighUnitMean }
    }

    pub fn with_half_length(mut self, half_length: f64) -> Self {
        self.half_length = half_length;
        self
    }

    pub fn with_fading(mut self, fading: FadingModel) -> Self {
        self.fading = fading;
        self
    }

    fn burn_in_for(&self, target: &Target) -> f64 {
        self.burn_in.unwrap_or_else(|| target.burn_in())
    }

    fn validate(&self, r0: f64) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::InvalidParameter("at least one run is needed".into()));
        }
        if !(self.half_length > r0 && self.half_length.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "half length {} must exceed the cell radius {r0}",
                self.half_length
            )));
        }
        if let Some(b) = self.burn_in {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::InvalidParameter(format!("burn-in {b} must be >= 0")));
            }
        }
        Ok(())
    }
}

/// One Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub value: f64,
    pub std_error: f64,
    pub runs: usize,
    pub seed: u64,
}

/// Sorted vehicle positions in `[-L, L]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Deployment {
    pub positions: Vec<f64>,
}

impl Deployment {
    pub fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.positions.windows(2).map(|w| w[1] - w[0])
    }
}

/// The random stream of run `run` under `seed`.
pub fn run_stream(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Headways `c + Exp(μ)` from `−(L + burn_in)`, kept on `[-L, L]`.
pub fn sample_hardcore<R: Rng + ?Sized>(p: &ScenarioParams, cfg: &SimConfig, rng: &mut R) -> Deployment {
    let mut positions = Vec::new();
    if p.is_empty() {
        return Deployment { positions };
    }
    let burn = cfg.burn_in_for(&Target::Renewal(*p));
    let (c, inv_mu, l) = (p.c(), 1.0 / p.mu(), cfg.half_length);
    let headway = |rng: &mut R| c + rng.sample::<f64, _>(Exp1) * inv_mu;
    let first = headway(rng);
    let mut x = -(l + burn) + rng.random::<f64>() * first;
    positions.reserve((2.0 * l * p.lambda() * 1.05) as usize + 16);
    while x <= l {
        if x >= -l {
            positions.push(x);
        }
        x += headway(rng);
    }
    Deployment { positions }
}

/// Points `r0 + z + kc`, `k ∈ ℤ`, with one uniform phase `z` per realization.
pub fn sample_lattice<R: Rng + ?Sized>(p: &LatticeParams, cfg: &SimConfig, rng: &mut R) -> Deployment {
    let (c, l) = (p.c(), cfg.half_length);
    let z = rng.random::<f64>() * c;
    let anchor = p.r0() + z;
    let k_lo = ((-l - anchor) / c).ceil() as i64;
    let k_hi = ((l - anchor) / c).floor() as i64;
    let positions = (k_lo..=k_hi).map(|k| anchor + k as f64 * c).filter(|x| x.abs() <= l).collect();
    Deployment { positions }
}

/// `Σ h_k g(x_k)`; vehicles inside the cell draw no fading gain.
pub fn interference_realization<R: Rng + ?Sized>(
    d: &Deployment,
    path: &Pathloss,
    fading: FadingModel,
    rng: &mut R,
) -> f64 {
    let mut sum = 0.0;
    for &x in &d.positions {
        if x.abs() > path.r0() {
            sum += fading.sample(rng) * path.eval(x);
        }
    }
    sum
}

fn sample<R: Rng + ?Sized>(target: &Target, cfg: &SimConfig, rng: &mut R) -> Deployment {
    match target {
        Target::Renewal(p) => sample_hardcore(p, cfg, rng),
        Target::Lattice(p) => sample_lattice(p, cfg, rng),
    }
}

/// Interference of every run, in run order.
pub fn interference_samples(target: &Target, cfg: &SimConfig) -> Result<Vec<f64>> {
    let path = target.pathloss();
    cfg.validate(path.r0())?;
    let samples = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_stream(cfg.seed, run);
            let d = sample(target, cfg, &mut rng);
            interference_realization(&d, &path, cfg.fading, &mut rng)
        })
        .collect();
    Ok(samples)
}

/// Monte Carlo moments with batch-means standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimMoments {
    pub model: Model,
    pub mean: SimEstimate,
    pub m2: SimEstimate,
    pub m3: SimEstimate,
    pub variance: SimEstimate,
    pub std_dev: SimEstimate,
    pub skewness: SimEstimate,
}

impl SimMoments {
    pub fn coeff_variation(&self) -> f64 {
        self.std_dev.value / self.mean.value
    }

    /// Raw moments as a [`MomentSet`] tagged [`Method::MonteCarlo`].
    pub fn to_moment_set(&self) -> Result<MomentSet> {
        MomentSet::from_raw(self.mean.value, self.m2.value, Some(self.m3.value), Method::MonteCarlo)
    }
}

/// Sample statistics of one block of runs.
#[derive(Debug, Clone, Copy)]
struct BlockStats {
    mean: f64,
    m2: f64,
    m3: f64,
    variance: f64,
    skewness: f64,
}

fn block_stats(xs: &[f64]) -> BlockStats {
    let n = xs.len() as f64;
    let mean = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    let m2 = xs.iter().map(|x| x * x).collect::<CompensatedSum>().value() / n;
    let m3 = xs.iter().map(|x| x * x * x).collect::<CompensatedSum>().value() / n;
    let c2 = xs.iter().map(|x| (x - mean).powi(2)).collect::<CompensatedSum>().value() / n;
    let c3 = xs.iter().map(|x| (x - mean).powi(3)).collect::<CompensatedSum>().value() / n;
    let variance = if n > 1.0 { c2 * n / (n - 1.0) } else { 0.0 };
    // adjusted Fisher–Pearson coefficient G1
    let skewness = if n > 2.0 && c2 > 0.0 { c3 / c2.powf(1.5) * (n * (n - 1.0)).sqrt() / (n - 2.0) } else { 0.0 };
    BlockStats { mean, m2, m3, variance, skewness }
}

fn batch_error(values: &[f64]) -> f64 {
    let b = values.len() as f64;
    let mean = values.iter().sum::<f64>() / b;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (b - 1.0);
    (var / b).sqrt()
}

/// Contiguous batches `[b·n/B, (b+1)·n/B)`.
fn batches<T>(xs: &[T], count: usize) -> impl Iterator<Item = &[T]> {
    let n = xs.len();
    (0..count).map(move |b| &xs[b * n / count..(b + 1) * n / count])
}

/// Estimates from per-run interference values.
pub fn moments_from_samples(model: Model, samples: &[f64], seed: u64) -> Result<SimMoments> {
    if samples.len() < BATCHES {
        return Err(Error::InvalidParameter(format!(
            "moment estimation needs at least {BATCHES} runs, got {}",
            samples.len()
        )));
    }
    let all = block_stats(samples);
    let per_batch: Vec<BlockStats> = batches(samples, BATCHES).map(block_stats).collect();
    let runs = samples.len();
    let est = |value: f64, f: fn(&BlockStats) -> f64| {
        let vals: Vec<f64> = per_batch.iter().map(f).collect();
        SimEstimate { value, std_error: batch_error(&vals), runs, seed }
    };
    Ok(SimMoments {
        model,
        mean: est(all.mean, |s| s.mean),
        m2: est(all.m2, |s| s.m2),
        m3: est(all.m3, |s| s.m3),
        variance: est(all.variance, |s| s.variance),
        std_dev: est(all.variance.sqrt(), |s| s.variance.sqrt()),
        skewness: est(all.skewness, |s| s.skewness),
    })
}

pub fn estimate_moments(target: &Target, cfg: &SimConfig) -> Result<SimMoments> {
    let samples = interference_samples(target, cfg)?;
    moments_from_samples(target.model(), &samples, cfg.seed)
}

/// Empirical CDF of consecutive gaps in a superposition of independent lanes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaneCdf {
    pub n_lanes: usize,
    /// Reference rate `N_L λ` of the exponential approximation.
    pub rate: f64,
    /// Sorted gaps from all runs.
    pub gaps: Vec<f64>,
    /// `sup_x |F_n(x) − (1 − e^(−N_L λ x))|`.
    pub sup_norm: f64,
}

impl LaneCdf {
    /// `F_n(x)`, the fraction of gaps `≤ x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.gaps.partition_point(|&g| g <= x) as f64 / self.gaps.len() as f64
    }

    /// `F_n(x⁻)`, the fraction of gaps `< x`.
    pub fn cdf_left(&self, x: f64) -> f64 {
        self.gaps.partition_point(|&g| g < x) as f64 / self.gaps.len() as f64
    }

    pub fn reference(&self, x: f64) -> f64 {
        -(-self.rate * x).exp_m1()
    }

    /// `(x, F_n(x), reference)` on `points` equally spaced abscissae in `[0, x_max]`.
    pub fn table(&self, x_max: f64, points: usize) -> Vec<(f64, f64, f64)> {
        (0..points)
            .map(|i| {
                let x = x_max * i as f64 / (points - 1).max(1) as f64;
                (x, self.cdf(x), self.reference(x))
            })
            .collect()
    }
}

pub fn lane_superposition_cdf(p: &ScenarioParams, n_lanes: usize, cfg: &SimConfig) -> Result<LaneCdf> {
    if n_lanes < 1 {
        return Err(Error::InvalidParameter("at least one lane is needed".into()));
    }
    cfg.validate(p.r0())?;
    let per_run: Vec<Vec<f64>> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_stream(cfg.seed, run);
            let mut all: Vec<f64> = Vec::new();
            for _ in 0..n_lanes {
                all.extend(sample_hardcore(p, cfg, &mut rng).positions);
            }
            all.sort_by(f64::total_cmp);
            all.windows(2).map(|w| w[1] - w[0]).collect()
        })
        .collect();
    let mut gaps: Vec<f64> = per_run.into_iter().flatten().collect();
    gaps.sort_by(f64::total_cmp);
    let rate = n_lanes as f64 * p.lambda();
    let n = gaps.len() as f64;
    let mut sup_norm: f64 = 0.0;
    for (i, &g) in gaps.iter().enumerate() {
        let f = -(-rate * g).exp_m1();
        sup_norm = sup_norm.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(LaneCdf { n_lanes, rate, gaps, sup_norm })
}

/// Pair density over one separation bin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub std_error: f64,
}

/// Pair density `ρ(d)` estimated by counting ordered pairs `x < y` with
/// `x ∈ [-L, L − d_max]` and `y − x` in each bin of `(0, d_max]`.
pub fn pcf_histogram(p: &ScenarioParams, cfg: &SimConfig, bin_width: f64, max_separation: f64) -> Result<Vec<HistBin>> {
    if !(bin_width > 0.0) || !(max_separation >= bin_width) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < bin_width <= max_separation, got {bin_width}, {max_separation}"
        )));
    }
    cfg.validate(p.r0())?;
    let l = cfg.half_length;
    if max_separation >= 2.0 * l {
        return Err(Error::InvalidParameter("max_separation must be below the segment length".into()));
    }
    let bins = (max_separation / bin_width).round() as usize;
    let window = 2.0 * l - max_separation;
    let norm = 1.0 / (window * bin_width);
    let per_run: Vec<Vec<f64>> = (0..cfg.runs as u64)
        .into_par_iter()
        .map(|run| {
            let mut rng = run_stream(cfg.seed, run);
            let d = sample_hardcore(p, cfg, &mut rng);
            let xs = &d.positions;
            let mut counts = vec![0u64; bins];
            for (i, &x) in xs.iter().enumerate() {
                if x > l - max_separation {
                    break;
                }
                for &y in &xs[i + 1..] {
                    let sep = y - x;
                    if sep > max_separation {
                        break;
                    }
                    // bins are right-closed: (lo, hi]
                    let b = ((sep / bin_width).ceil() as usize).saturating_sub(1).min(bins - 1);
                    counts[b] += 1;
                }
            }
            counts.into_iter().map(|n| n as f64 * norm).collect()
        })
        .collect();
    let runs = per_run.len();
    let groups = if runs >= BATCHES { BATCHES } else { runs };
    let result = (0..bins)
        .map(|b| {
            let column: Vec<f64> = per_run.iter().map(|r| r[b]).collect();
            let value = column.iter().copied().collect::<CompensatedSum>().value() / runs as f64;
            let std_error = if groups > 1 {
                let means: Vec<f64> =
                    batches(&column, groups).map(|s| s.iter().sum::<f64>() / s.len() as f64).collect();
                batch_error(&means)
            } else {
                0.0
            };
            HistBin { lo: b as f64 * bin_width, hi: (b + 1) as f64 * bin_width, value, std_error }
        })
        .collect();
    Ok(result)
}
