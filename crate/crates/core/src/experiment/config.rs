//! TOML experiment descriptors.
//!
//! Common keys live at the top level (`schema_version`, `kind`, `seed`,
//! `output`); everything else belongs to the kind and is parsed strictly, so
//! a misspelled key is a config error rather than a silently ignored one.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::averaging::CONTRAST_LADDER;
use crate::profile::WeightProfile;
use crate::random_model::{CouplingLaw, SiteProfile, WEGNER_LADDER};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn config_err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PairSpec {
    /// GUE `A` and rank-`rank` PSD `B` from the run seed.
    Random { n: usize, rank: usize },
    /// The contrast instance: `n = 40`, rank 3.
    Desk,
    /// `A` with an eigenvector `v` in `ker B`; `Φ` defaults to `v`.
    NegativeControl { n: usize, rank: usize },
    Diagonal { a: Vec<f64>, b: Vec<f64> },
    /// Matrix files relative to the config file.
    Files { a: PathBuf, b: PathBuf },
}

impl PairSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, Self::Random { .. } | Self::Desk | Self::NegativeControl { .. })
    }
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum PhiSpec {
    Values(Vec<f64>),
    /// `"range"`: seeded unit vector `Bx/‖Bx‖`; `"random"`: seeded unit
    /// vector; `"default"`: whatever the pair source prescribes.
    Named(String),
}

impl Default for PhiSpec {
    fn default() -> Self {
        Self::Named("default".into())
    }
}

impl PhiSpec {
    pub fn is_random(&self) -> bool {
        matches!(self, Self::Named(s) if s == "range" || s == "random")
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AverageParams {
    pub pair: PairSpec,
    #[serde(default)]
    pub phi: PhiSpec,
    pub profile: WeightProfile,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_fine_bin")]
    pub bin_width: f64,
    /// L¹ tolerance against the closed form (1×1 pairs only).
    #[serde(default = "default_milli")]
    pub oracle_tolerance: f64,
    /// Relative tolerance of `‖ν‖ = ‖Φ‖²∫h`.
    #[serde(default = "default_mass_tolerance")]
    pub mass_tolerance: f64,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Arm {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ContrastParams {
    pub pair: PairSpec,
    #[serde(default)]
    pub phi: PhiSpec,
    pub profile: WeightProfile,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default = "default_contrast_ladder")]
    pub epsilons: Vec<f64>,
    /// Allowed `max/min` of the averaged window densities.
    #[serde(default = "default_contrast_ratio")]
    pub density_ratio_tolerance: f64,
    #[serde(default = "default_arm")]
    pub arm: Arm,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeOfVariablesParams {
    pub pair: PairSpec,
    #[serde(default)]
    pub phi: PhiSpec,
    pub profile: WeightProfile,
    #[serde(default = "default_cov_nodes")]
    pub nodes: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_coarse_bin")]
    pub bin_width: f64,
    #[serde(default = "default_milli")]
    pub tv_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Diagonal fibers given by their entries.
    Diagonal { fibers: Vec<Vec<f64>>, weights: Vec<f64> },
    /// Fibers `A + t_j B` of a pair.
    Pair {
        pair: PairSpec,
        ts: Vec<f64>,
        weights: Vec<f64>,
    },
    /// `fibers` fibers at seeded `t_j ∈ [−2, 2]` with weights in `[0, 1)`.
    RandomPair { pair: PairSpec, fibers: usize },
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DirectIntegralParams {
    pub family: FamilySpec,
    #[serde(default)]
    pub f: PhiSpec,
    #[serde(default)]
    pub intervals: Vec<[f64; 2]>,
    /// Additional seeded intervals.
    #[serde(default)]
    pub random_intervals: usize,
    #[serde(default = "default_decomposition_tolerance")]
    pub tolerance: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorParams {
    pub n: usize,
    pub l: f64,
    /// `min eig ≥ −tolerance·‖C‖`.
    #[serde(default = "default_positivity_tolerance")]
    pub min_eig_tolerance: f64,
    #[serde(default = "default_positive_fraction")]
    pub positive_fraction: f64,
    /// Grids `(N, L)` for the positive-part infimum diagnostic.
    #[serde(default)]
    pub refinement: Vec<(usize, f64)>,
    #[serde(default = "default_refinement_tolerance")]
    pub refinement_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct KatoPutnamParams {
    pub pair: PairSpec,
    pub n: usize,
    pub l: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_kronecker_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_positivity_tolerance")]
    pub positivity_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CyclicityParams {
    pub pair: PairSpec,
    /// Expected rank; without it the rank is only reported.
    pub expect: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum SiteSpec {
    /// `"indicator"`.
    Named(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum LawSpec {
    Discrete { values: Vec<f64>, probs: Vec<f64> },
    Density(WeightProfile),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub cells: usize,
    pub mesh: usize,
    pub u: SiteSpec,
    pub law: LawSpec,
    pub v0: Option<Vec<f64>>,
}

impl ModelSpec {
    pub fn site_profile(&self) -> Result<SiteProfile, ConfigError> {
        match &self.u {
            SiteSpec::Named(s) if s == "indicator" => Ok(SiteProfile::Indicator),
            SiteSpec::Named(s) => Err(config_err(format!("unknown single-site profile {s:?}"))),
            SiteSpec::Values(v) => Ok(SiteProfile::Bump(v.clone())),
        }
    }

    pub fn coupling_law(&self) -> CouplingLaw {
        match &self.law {
            LawSpec::Discrete { values, probs } => CouplingLaw::Discrete {
                values: values.clone(),
                probs: probs.clone(),
            },
            LawSpec::Density(h) => CouplingLaw::Density(h.clone()),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IdsParams {
    pub model: ModelSpec,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Average over every outcome of a discrete law instead of sampling.
    #[serde(default)]
    pub enumerate: bool,
    pub bins: Option<usize>,
    pub bin_width: Option<f64>,
    /// Also estimate at `2M` cells on a shared grid.
    #[serde(default)]
    pub two_volume: bool,
    #[serde(default = "default_trace_tolerance")]
    pub trace_tolerance: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WegnerParams {
    pub model: ModelSpec,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_wegner_bin")]
    pub bin_width: f64,
    #[serde(default = "default_wegner_ladder")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_wegner_stability")]
    pub stability: f64,
    /// `false` for a control run that must fail the stability criterion.
    #[serde(default = "default_true")]
    pub expect_stable: bool,
}

#[derive(Debug, Clone)]
pub enum Experiment {
    Average(AverageParams),
    Contrast(ContrastParams),
    ChangeOfVariables(ChangeOfVariablesParams),
    DirectIntegral(DirectIntegralParams),
    Commutator(CommutatorParams),
    KatoPutnam(KatoPutnamParams),
    Cyclicity(CyclicityParams),
    Ids(IdsParams),
    Wegner(WegnerParams),
}

pub const KINDS: [&str; 9] = [
    "average",
    "contrast",
    "change-of-variables",
    "direct-integral",
    "commutator",
    "kato-putnam",
    "cyclicity",
    "ids",
    "wegner",
];

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Average(_) => "average",
            Self::Contrast(_) => "contrast",
            Self::ChangeOfVariables(_) => "change-of-variables",
            Self::DirectIntegral(_) => "direct-integral",
            Self::Commutator(_) => "commutator",
            Self::KatoPutnam(_) => "kato-putnam",
            Self::Cyclicity(_) => "cyclicity",
            Self::Ids(_) => "ids",
            Self::Wegner(_) => "wegner",
        }
    }

    /// Whether the run draws random numbers and therefore needs a seed.
    pub fn is_randomized(&self) -> bool {
        match self {
            Self::Average(p) => p.pair.is_random() || p.phi.is_random(),
            Self::Contrast(p) => p.pair.is_random() || p.phi.is_random(),
            Self::ChangeOfVariables(p) => p.pair.is_random() || p.phi.is_random(),
            Self::DirectIntegral(p) => {
                p.random_intervals > 0
                    || p.f.is_random()
                    || match &p.family {
                        FamilySpec::Diagonal { .. } => false,
                        FamilySpec::Pair { pair, .. } => pair.is_random(),
                        FamilySpec::RandomPair { .. } => true,
                    }
            }
            Self::Commutator(_) => false,
            Self::KatoPutnam(p) => p.pair.is_random(),
            Self::Cyclicity(p) => p.pair.is_random(),
            Self::Ids(p) => !p.enumerate,
            Self::Wegner(_) => true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub seed: Option<u64>,
    /// Output directory as written in the config.
    pub output: Option<PathBuf>,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
    /// Config file stem, used as the experiment id.
    pub id: String,
    pub experiment: Experiment,
    /// The kind-specific table as written, echoed into the report.
    pub parameters: toml::Table,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "experiment".into());
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &id, base_dir)
    }

    pub fn parse(text: &str, id: &str, base_dir: PathBuf) -> Result<Self, ConfigError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        let schema_version = match table.remove("schema_version") {
            Some(toml::Value::Integer(v)) if v == SCHEMA_VERSION as i64 => SCHEMA_VERSION,
            Some(v) => return Err(config_err(format!("unsupported schema_version {v}, expected {SCHEMA_VERSION}"))),
            None => return Err(config_err("missing schema_version")),
        };
        let kind = match table.remove("kind") {
            Some(toml::Value::String(s)) => s,
            Some(_) => return Err(config_err("kind must be a string")),
            None => return Err(config_err("missing kind")),
        };
        let seed = match table.remove("seed") {
            Some(toml::Value::Integer(s)) if s >= 0 => Some(s as u64),
            Some(_) => return Err(config_err("seed must be a nonnegative integer")),
            None => None,
        };
        let output = match table.remove("output") {
            Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(config_err("output must be a string")),
            None => None,
        };
        let parameters = table.clone();
        let experiment = match kind.as_str() {
            "average" => Experiment::Average(params(table)?),
            "contrast" => Experiment::Contrast(params(table)?),
            "change-of-variables" => Experiment::ChangeOfVariables(params(table)?),
            "direct-integral" => Experiment::DirectIntegral(params(table)?),
            "commutator" => Experiment::Commutator(params(table)?),
            "kato-putnam" => Experiment::KatoPutnam(params(table)?),
            "cyclicity" => Experiment::Cyclicity(params(table)?),
            "ids" => Experiment::Ids(params(table)?),
            "wegner" => Experiment::Wegner(params(table)?),
            other => return Err(config_err(format!("unknown experiment kind {other:?}; known: {}", KINDS.join(", ")))),
        };
        let config = Self {
            schema_version,
            seed,
            output,
            base_dir,
            id: id.to_string(),
            experiment,
            parameters,
        };
        config.check_tolerances()?;
        Ok(config)
    }

    /// Validation that depends on the effective seed.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.experiment.is_randomized() && self.seed.is_none() {
            return Err(config_err(format!("{} experiment draws random numbers and needs an explicit seed", self.experiment.kind())));
        }
        Ok(())
    }

    fn check_tolerances(&self) -> Result<(), ConfigError> {
        let tolerances: Vec<(&str, f64)> = match &self.experiment {
            Experiment::Average(p) => vec![
                ("oracle_tolerance", p.oracle_tolerance),
                ("mass_tolerance", p.mass_tolerance),
                ("bin_width", p.bin_width),
            ],
            Experiment::Contrast(p) => vec![("density_ratio_tolerance", p.density_ratio_tolerance)],
            Experiment::ChangeOfVariables(p) => vec![("tv_tolerance", p.tv_tolerance), ("bin_width", p.bin_width)],
            Experiment::DirectIntegral(p) => vec![("tolerance", p.tolerance)],
            Experiment::Commutator(p) => vec![
                ("min_eig_tolerance", p.min_eig_tolerance),
                ("positive_fraction", p.positive_fraction),
                ("refinement_tolerance", p.refinement_tolerance),
            ],
            Experiment::KatoPutnam(p) => vec![("tolerance", p.tolerance), ("positivity_tolerance", p.positivity_tolerance)],
            Experiment::Cyclicity(_) => vec![],
            Experiment::Ids(p) => {
                let mut v = vec![("trace_tolerance", p.trace_tolerance)];
                v.extend(p.bin_width.map(|w| ("bin_width", w)));
                v
            }
            Experiment::Wegner(p) => vec![("stability", p.stability), ("bin_width", p.bin_width)],
        };
        for (name, value) in tolerances {
            if !(value > 0.0) || !value.is_finite() {
                return Err(config_err(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }
}

fn params<T: DeserializeOwned>(table: toml::Table) -> Result<T, ConfigError> {
    T::deserialize(toml::Value::Table(table)).map_err(|e| config_err(e.to_string()))
}

fn default_nodes() -> usize {
    crate::quadrature::DEFAULT_NODES
}
fn default_cov_nodes() -> usize {
    4000
}
fn default_fine_bin() -> f64 {
    1e-3
}
fn default_coarse_bin() -> f64 {
    crate::averaging::DEFAULT_COMPARISON_BIN
}
fn default_milli() -> f64 {
    1e-3
}
fn default_mass_tolerance() -> f64 {
    crate::quadrature::RULE_TOLERANCE
}
fn default_contrast_ladder() -> Vec<f64> {
    CONTRAST_LADDER.to_vec()
}
fn default_contrast_ratio() -> f64 {
    4.0
}
fn default_arm() -> Arm {
    Arm::Positive
}
fn default_delta() -> f64 {
    crate::averaging::DEFAULT_CUTOFF
}
fn default_decomposition_tolerance() -> f64 {
    crate::commutator::DECOMPOSITION_TOLERANCE
}
fn default_positivity_tolerance() -> f64 {
    crate::commutator::POSITIVITY_TOLERANCE
}
fn default_positive_fraction() -> f64 {
    0.9
}
fn default_refinement_tolerance() -> f64 {
    0.1
}
fn default_cap() -> usize {
    crate::commutator::KRONECKER_CAP
}
fn default_kronecker_tolerance() -> f64 {
    crate::commutator::KRONECKER_TOLERANCE
}
fn default_samples() -> usize {
    100
}
fn default_trace_tolerance() -> f64 {
    1e-10
}
fn default_wegner_bin() -> f64 {
    crate::random_model::DEFAULT_WEGNER_BIN
}
fn default_wegner_ladder() -> Vec<f64> {
    WEGNER_LADDER.to_vec()
}
fn default_wegner_stability() -> f64 {
    crate::random_model::WEGNER_STABILITY
}
fn default_true() -> bool {
    true
}
