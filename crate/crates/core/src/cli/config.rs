//! Run settings, their layering, and the named figure recipes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::closedform::Variant;
use crate::scenario::FadingModel;
use crate::simulate::{Model, DEFAULT_HALF_LENGTH};
use crate::{Error, Result};

const RECIPES: &str = include_str!("recipes.json");

/// One grid axis: a single value, a list, or `steps` evenly spaced points
/// from `from` to `to` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    One(f64),
    Values(Vec<f64>),
    Range { from: f64, to: f64, steps: usize },
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            Axis::One(v) => Ok(vec![v]),
            Axis::Values(ref v) if v.is_empty() => Err(Error::InvalidParameter("empty axis".into())),
            Axis::Values(ref v) => Ok(v.clone()),
            Axis::Range { steps: 0, .. } => Err(Error::InvalidParameter("axis range needs steps >= 1".into())),
            Axis::Range { from, steps: 1, .. } => Ok(vec![from]),
            Axis::Range { from, to, steps } => {
                let n = (steps - 1) as f64;
                Ok((0..steps).map(|i| from + (to - from) * (i as f64 / n)).collect())
            }
        }
    }
}

/// `0.1,0.2,0.4` or `from:to:steps`.
impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [from, to, steps] = parts[..] else {
                return Err(format!("range `{s}` must be from:to:steps"));
            };
            let steps = steps.trim().parse::<usize>().map_err(|e| format!("`{steps}`: {e}"))?;
            return Ok(Axis::Range { from: num(from)?, to: num(to)?, steps });
        }
        let values = s.split(',').map(num).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(match values[..] {
            [v] => Axis::One(v),
            _ => Axis::Values(values),
        })
    }
}

/// Which simulator output `simulate` produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SimKind {
    /// Interference moments with standard errors.
    Moments,
    /// Gap CDF of superposed lanes against the exponential reference.
    Lanes,
    /// Pair-density histogram against the analytic pair correlation.
    Pcf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Moments,
    Closedform,
    Lattice,
    Simulate,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Moments => "moments",
            CommandKind::Closedform => "closedform",
            CommandKind::Lattice => "lattice",
            CommandKind::Simulate => "simulate",
        })
    }
}

/// Every tunable of a run. Unset fields fall through to the layer below;
/// [`Settings::with_defaults`] fills what is still missing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<Axis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub third: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variants: Option<Vec<Variant>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<SimKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lanes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fading: Option<FadingModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bin_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_separation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cdf_points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quad_rel_tol: Option<f64>,
}

pub const DEFAULT_RUNS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;

macro_rules! overlay_fields {
    ($top:expr, $base:expr, $out:ident; $($f:ident),*) => {
        $( $out.$f = $top.$f.clone().or_else(|| $base.$f.clone()); )*
    };
}

impl Settings {
    /// `top` over `self`. The rate is one unit: setting either `lambda` or
    /// `mu` on top replaces both below.
    pub fn overlay(&self, top: &Settings) -> Settings {
        let mut out = Settings::default();
        overlay_fields!(top, self, out; c, r0, eta, m, third, variants, model, kind, lanes, runs, seed,
            half_length, burn_in, fading, bin_width, max_separation, x_max, cdf_points, quad_rel_tol);
        if top.lambda.is_some() || top.mu.is_some() {
            out.lambda = top.lambda.clone();
            out.mu = top.mu.clone();
        } else {
            out.lambda = self.lambda.clone();
            out.mu = self.mu.clone();
        }
        out
    }

    /// Fills the defaults relevant to `cmd` so the settings fully describe the run.
    pub fn with_defaults(mut self, cmd: CommandKind) -> Settings {
        self.r0.get_or_insert(Axis::One(100.0));
        self.eta.get_or_insert(Axis::One(3.0));
        self.quad_rel_tol.get_or_insert(1e-9);
        match cmd {
            CommandKind::Moments => {
                self.m.get_or_insert(2);
                self.third.get_or_insert(false);
            }
            CommandKind::Closedform => {
                self.variants.get_or_insert_with(|| Variant::ALL.to_vec());
            }
            CommandKind::Lattice => {}
            CommandKind::Simulate => {
                let kind = *self.kind.get_or_insert(SimKind::Moments);
                self.model.get_or_insert(Model::Hardcore);
                self.runs.get_or_insert(DEFAULT_RUNS);
                self.seed.get_or_insert(DEFAULT_SEED);
                self.half_length.get_or_insert(DEFAULT_HALF_LENGTH);
                self.fading.get_or_insert(FadingModel::RayleighUnitMean);
                match kind {
                    SimKind::Moments => {}
                    SimKind::Lanes => {
                        self.lanes.get_or_insert_with(|| vec![1]);
                        self.cdf_points.get_or_insert(241);
                    }
                    SimKind::Pcf => {
                        self.bin_width.get_or_insert(0.5);
                        self.max_separation.get_or_insert(24.0);
                    }
                }
            }
        }
        self
    }
}

/// Resolves a required setting.
pub(crate) fn required<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| Error::InvalidParameter(format!("`{name}` is not set")))
}

/// A named preset: a base layer and the parts it is split into.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub command: CommandKind,
    pub description: String,
    #[serde(default)]
    pub base: Settings,
    #[serde(default)]
    pub parts: Vec<Settings>,
}

impl Recipe {
    /// Each part over the base, or the base alone.
    pub fn layers(&self) -> Vec<Settings> {
        if self.parts.is_empty() {
            vec![self.base.clone()]
        } else {
            self.parts.iter().map(|p| self.base.overlay(p)).collect()
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecipeBook {
    version: u32,
    recipes: BTreeMap<String, Recipe>,
}

fn book() -> RecipeBook {
    serde_json::from_str(RECIPES).expect("bundled recipe file is valid")
}

/// Version of the bundled recipe file; bumped whenever a recipe's grid or columns change.
pub fn recipe_version() -> u32 {
    book().version
}

pub fn recipe(name: &str) -> Result<Recipe> {
    book().recipes.remove(name).ok_or_else(|| Error::UnknownRecipe(name.to_string()))
}

pub fn recipes() -> BTreeMap<String, Recipe> {
    book().recipes
}

/// A config file: either plain [`Settings`] or a run manifest, whose
/// resolved parts replace the command's own.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum ConfigFile {
    Layer(Settings),
    Replay { command: CommandKind, parts: Vec<Settings> },
}

#[derive(Deserialize)]
struct ReplayFields {
    command: CommandKind,
    parts: Vec<Settings>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        if value.get("parts").is_some() {
            let r: ReplayFields = serde_json::from_value(value)?;
            Ok(ConfigFile::Replay { command: r.command, parts: r.parts })
        } else {
            Ok(ConfigFile::Layer(serde_json::from_value(value)?))
        }
    }
}
