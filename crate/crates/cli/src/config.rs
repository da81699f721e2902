//! JSON configuration shared by every subcommand.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Deserializer};
use sha2::{Digest, Sha256};

use novikov_core::experiments::Datum;
use novikov_core::lp::harness::{DEFAULT_CASES, DEFAULT_SEED};
use novikov_core::lp::SpaceParams;
use novikov_core::pde::{EquationKind, SolveConfig};
use novikov_core::spectral::{Grid, DEFAULT_HALF_LENGTH};

/// Accepts a number or one of `"inf"`, `"infinity"`.
fn index<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(v) => Ok(v),
        Raw::Text(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") => Ok(f64::INFINITY),
        Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L", default = "default_half_length")]
    pub half_length: f64,
    #[serde(rename = "N")]
    pub n: usize,
}

fn default_half_length() -> f64 {
    DEFAULT_HALF_LENGTH
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { half_length: DEFAULT_HALF_LENGTH, n: 1024 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Ok(Grid::new(self.half_length, self.n)?)
    }
}

/// `F^s_{p,r}` indices.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub s: f64,
    #[serde(deserialize_with = "index")]
    pub p: f64,
    #[serde(deserialize_with = "index")]
    pub r: f64,
}

impl Default for SpaceConfig {
    fn default() -> Self {
        SpaceConfig { s: 2.0, p: 2.0, r: 2.0 }
    }
}

impl SpaceConfig {
    pub fn params(&self) -> Result<SpaceParams> {
        let p = SpaceParams::triebel_lizorkin(self.s, self.p, self.r);
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaylorSection {
    pub t_list: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NudSection {
    pub n_list: Vec<u32>,
    pub t_eval: Vec<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContinuitySection {
    pub deltas: Vec<f64>,
    pub levels: Vec<i32>,
    pub times: Vec<f64>,
    pub perturbation: Datum,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSection {
    pub n_max: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TravelSection {
    #[serde(default = "one")]
    pub c: f64,
    pub sigmas: Vec<f64>,
    #[serde(default = "minus_five")]
    pub start: f64,
    #[serde(rename = "T", default = "one")]
    pub t_final: f64,
}

fn one() -> f64 {
    1.0
}

fn minus_five() -> f64 {
    -5.0
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeakonSection {
    pub positions: Vec<f64>,
    pub momenta: Vec<f64>,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub dt: f64,
    /// Mollified-PDE crest-speed comparison.
    #[serde(default)]
    pub travel: Option<TravelSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingSection {
    pub n_list: Vec<u32>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "all_lemmas")]
    pub lemmas: Vec<String>,
    #[serde(default = "default_cases")]
    pub cases: usize,
}

pub const LEMMAS: [&str; 4] = ["moser", "product_law", "commutator", "transport"];

fn all_lemmas() -> Vec<String> {
    LEMMAS.iter().map(|s| s.to_string()).collect()
}

fn default_cases() -> usize {
    DEFAULT_CASES
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub space: SpaceConfig,
    #[serde(default)]
    pub solver: SolveConfig,
    #[serde(default)]
    pub equation: EquationKind,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "yes")]
    pub parallel: bool,
    #[serde(default)]
    pub datum: Option<Datum>,
    #[serde(default)]
    pub taylor: Option<TaylorSection>,
    #[serde(default)]
    pub nud: Option<NudSection>,
    #[serde(default)]
    pub continuity: Option<ContinuitySection>,
    #[serde(default)]
    pub picard: Option<PicardSection>,
    #[serde(default)]
    pub peakon: Option<PeakonSection>,
    #[serde(default)]
    pub scaling: Option<ScalingSection>,
    #[serde(default)]
    pub verify: Option<VerifySection>,
}

/// A parsed config together with the SHA-256 of its bytes.
pub struct Loaded {
    pub config: Config,
    pub raw: serde_json::Value,
    pub hash: String,
}

pub fn load(path: &std::path::Path) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("reading config {}", path.display()))?;
    let config: Config =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing config {}", path.display()))?;
    let raw = serde_json::from_slice(&bytes)?;
    config.solver.validate().context("solver section")?;
    let hash = hex::encode(Sha256::digest(&bytes));
    Ok(Loaded { config, raw, hash })
}

impl Config {
    pub fn datum(&self) -> Result<&Datum> {
        match &self.datum {
            Some(d) => Ok(d),
            None => bail!("config has no `datum` section"),
        }
    }

    pub fn section<'a, T>(&self, s: &'a Option<T>, name: &str) -> Result<&'a T> {
        s.as_ref().with_context(|| format!("config has no `{name}` section"))
    }

    pub fn execution(&self) -> novikov_core::Execution {
        if self.parallel {
            novikov_core::Execution::default()
        } else {
            novikov_core::Execution::Sequential
        }
    }
}
