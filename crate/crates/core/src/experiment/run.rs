//! Executes a parsed experiment and writes its artifacts.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::config::*;
use crate::averaging::{
    average_spectral_measure, change_of_variables_check, desk_instance, negative_control, scalar_oracle_density,
    smoothing_contrast,
};
use crate::commutator::{
    build_grid, commutator, decomposition_identity_check, howland_report, kato_putnam_identity, positivity_report,
    refinement_report, write_spectrum, CheckRecord, FiberFamily,
};
use crate::error::Error;
use crate::fixtures::{random_pair, random_unit_vector, range_vector};
use crate::measure::{format_f64, Interval};
use crate::quadrature::QuadratureRule;
use crate::random_model::{
    ids_estimate, two_volume_comparison, wegner_report, EnergyBins, RandomModel, Sampling,
};
use crate::spectral::{cyclicity_rank, norm_sqr, read_matrix, real_vector, HermitianOperator, OperatorPair, Vector};

/// Environment variable naming the default output root.
pub const OUTPUT_ROOT_ENV: &str = "SPECAVG_OUTPUT_ROOT";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Numerical(_) | Self::Output { .. } => 3,
        }
    }
}

fn config_error(msg: impl Into<String>) -> RunError {
    RunError::Config(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub id: String,
    pub schema_version: u32,
    pub seed: Option<u64>,
    pub parameters: Value,
    pub metrics: Map<String, Value>,
    pub checks: Vec<CheckRecord>,
    pub warnings: Vec<String>,
    pub files: Vec<String>,
    pub pass: bool,
    pub wall_time_s: f64,
}

/// Output directory: `--out` if given, else the config's `output` (default
/// `specavg-out/<id>`) under `$SPECAVG_OUTPUT_ROOT` or the working
/// directory. An absolute `output` is used as is.
pub fn output_dir(config: &ExperimentConfig, out_flag: Option<&Path>, env_root: Option<&Path>) -> PathBuf {
    if let Some(out) = out_flag {
        return out.to_path_buf();
    }
    let rel = config
        .output
        .clone()
        .unwrap_or_else(|| Path::new("specavg-out").join(&config.id));
    match env_root {
        Some(root) if rel.is_relative() => root.join(rel),
        _ => rel,
    }
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    seed: Option<u64>,
    dir: PathBuf,
    metrics: Map<String, Value>,
    checks: Vec<CheckRecord>,
    warnings: Vec<String>,
    files: Vec<String>,
}

impl Context<'_> {
    fn seed(&self) -> Result<u64, RunError> {
        self.seed.ok_or_else(|| config_error("this experiment needs a seed"))
    }

    fn metric(&mut self, name: &str, value: impl Serialize) {
        self.metrics
            .insert(name.into(), serde_json::to_value(value).expect("metric serializes"));
    }

    fn check(&mut self, record: CheckRecord) {
        self.checks.push(record);
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> crate::Result<()>) -> Result<(), RunError> {
        let path = self.dir.join(name);
        let io_err = |source| RunError::Output { path: path.clone(), source };
        let file = File::create(&path).map_err(io_err)?;
        let mut out = BufWriter::new(file);
        body(&mut out).map_err(|e| match e {
            Error::Io(source) => RunError::Output { path: path.clone(), source },
            other => RunError::Numerical(other),
        })?;
        out.flush().map_err(io_err)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn resolve_path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.config.base_dir.join(p)
        }
    }

    /// The pair and the `Φ` its source prescribes.
    fn pair(&self, spec: &PairSpec) -> Result<(OperatorPair, Vector, Option<f64>), RunError> {
        Ok(match spec {
            PairSpec::Random { n, rank } => {
                let seed = self.seed()?;
                let pair = random_pair(*n, *rank, seed)?;
                let phi = range_vector(&pair, seed.wrapping_add(1));
                (pair, phi, None)
            }
            PairSpec::Desk => {
                let (pair, phi, _) = desk_instance(self.seed()?)?;
                (pair, phi, None)
            }
            PairSpec::NegativeControl { n, rank } => {
                let (pair, v, lambda) = negative_control(*n, *rank, self.seed()?)?;
                (pair, v, Some(lambda))
            }
            PairSpec::Diagonal { a, b } => {
                if a.len() != b.len() || a.is_empty() {
                    return Err(config_error("diagonal pair needs nonempty a and b of equal length"));
                }
                let pair = OperatorPair::new(HermitianOperator::diagonal(a), HermitianOperator::diagonal(b))?;
                (pair, real_vector(&vec![1.0; a.len()]), None)
            }
            PairSpec::Files { a, b } => {
                let load = |p: &Path| -> Result<HermitianOperator, RunError> {
                    let path = self.resolve_path(p);
                    let file = File::open(&path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
                    read_matrix(std::io::BufReader::new(file)).map_err(|e| config_error(format!("{}: {e}", path.display())))
                };
                let pair = OperatorPair::new(load(a)?, load(b)?)?;
                let n = pair.dim();
                (pair, real_vector(&vec![1.0; n]), None)
            }
        })
    }

    fn phi(&self, spec: &PhiSpec, pair: &OperatorPair, default: Vector) -> Result<Vector, RunError> {
        let n = pair.dim();
        match spec {
            PhiSpec::Values(v) => {
                if v.len() != n {
                    return Err(config_error(format!("phi has {} entries, pair dimension is {n}", v.len())));
                }
                Ok(real_vector(v))
            }
            PhiSpec::Named(name) => match name.as_str() {
                "default" => Ok(default),
                "range" => Ok(range_vector(pair, self.seed()?.wrapping_add(1))),
                "random" => Ok(random_unit_vector(n, self.seed()?.wrapping_add(2))),
                other => Err(config_error(format!("unknown phi {other:?}"))),
            },
        }
    }
}

/// Runs the experiment, writing artifacts into `dir`.
pub fn run(config: &ExperimentConfig, seed_override: Option<u64>, dir: &Path) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let seed = seed_override.or(config.seed);
    let mut effective = config.clone();
    effective.seed = seed;
    effective.validate()?;
    std::fs::create_dir_all(dir).map_err(|source| RunError::Output {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut ctx = Context {
        config,
        seed,
        dir: dir.to_path_buf(),
        metrics: Map::new(),
        checks: Vec::new(),
        warnings: Vec::new(),
        files: Vec::new(),
    };
    match &config.experiment {
        Experiment::Average(p) => run_average(&mut ctx, p)?,
        Experiment::Contrast(p) => run_contrast(&mut ctx, p)?,
        Experiment::ChangeOfVariables(p) => run_change_of_variables(&mut ctx, p)?,
        Experiment::DirectIntegral(p) => run_direct_integral(&mut ctx, p)?,
        Experiment::Commutator(p) => run_commutator(&mut ctx, p)?,
        Experiment::KatoPutnam(p) => run_kato_putnam(&mut ctx, p)?,
        Experiment::Cyclicity(p) => run_cyclicity(&mut ctx, p)?,
        Experiment::Ids(p) => run_ids(&mut ctx, p)?,
        Experiment::Wegner(p) => run_wegner(&mut ctx, p)?,
    }
    let checks = ctx.checks.clone();
    ctx.write("checks.jsonl", |out| {
        for c in &checks {
            writeln!(out, "{}", c.to_json())?;
        }
        Ok(())
    })?;
    let mut report = RunReport {
        experiment: config.experiment.kind().to_string(),
        id: config.id.clone(),
        schema_version: config.schema_version,
        seed,
        parameters: serde_json::to_value(&config.parameters).expect("toml table converts to json"),
        pass: ctx.checks.iter().all(|c| c.pass),
        metrics: ctx.metrics,
        checks: ctx.checks,
        warnings: ctx.warnings,
        files: ctx.files,
        wall_time_s: 0.0,
    };
    report.files.push("report.json".into());
    report.wall_time_s = start.elapsed().as_secs_f64();
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    std::fs::write(&path, text + "\n").map_err(|source| RunError::Output { path, source })?;
    Ok(report)
}

fn warn_range(ctx: &mut Context, defect: f64) {
    ctx.metric("range_defect", defect);
    if defect > crate::spectral::RANK_TOLERANCE {
        ctx.warnings
            .push(format!("phi is not in Range(B): relative defect {defect:.3e}; absolute continuity is not expected"));
    }
}

fn run_average(ctx: &mut Context, p: &AverageParams) -> Result<(), RunError> {
    let (pair, default_phi, _) = ctx.pair(&p.pair)?;
    let phi = ctx.phi(&p.phi, &pair, default_phi)?;
    let rule = QuadratureRule::for_profile(&p.profile, p.nodes)?;
    let avg = average_spectral_measure(&pair, &phi, &p.profile, &rule)?;
    warn_range(ctx, avg.range_defect);
    let nu = &avg.measure;
    let expected = norm_sqr(&phi) * p.profile.mass();
    ctx.metric("total_mass", nu.total_mass());
    ctx.metric("expected_mass", expected);
    ctx.metric("nodes", rule.len());
    ctx.check(CheckRecord::new(
        "average-mass",
        (nu.total_mass() - expected).abs() / expected.max(f64::MIN_POSITIVE),
        p.mass_tolerance,
    ));
    ctx.write("nu_atoms.csv", |out| nu.write_csv(out))?;

    let w = p.bin_width;
    let oracle = if pair.dim() == 1 {
        let (a, b) = (pair.a().matrix()[(0, 0)].re, pair.b().matrix()[(0, 0)].re);
        Some(scalar_oracle_density(a, b, &p.profile).map_err(|e| config_error(e.to_string()))?)
    } else {
        None
    };
    let (origin, count) = match (&oracle, nu.support_hull()) {
        (Some(o), _) => {
            let (lo, hi) = o.support();
            (lo, ((hi - lo) / w).round().max(1.0) as usize)
        }
        (None, Some(hull)) => (hull.lo() - w, ((hull.hi() - hull.lo()) / w).ceil() as usize + 2),
        (None, None) => (0.0, 1),
    };
    let binned = nu.bin_linear(w, origin, count)?;
    ctx.write("nu_binned.csv", |out| binned.write_csv(out))?;
    if let Some(o) = oracle {
        let exact = o.linear_binned(w, origin, count);
        let l1: f64 = binned.masses().iter().zip(&exact).map(|(x, y)| (x - y).abs()).sum();
        ctx.metric("oracle_l1", l1);
        ctx.check(CheckRecord::new("average-oracle-l1", l1, p.oracle_tolerance));
        ctx.write("oracle_binned.csv", |out| {
            crate::BinnedMeasure::new(origin, w, exact.iter().map(|m| m.max(0.0)).collect())?.write_csv(out)
        })?;
    }
    Ok(())
}

fn run_contrast(ctx: &mut Context, p: &ContrastParams) -> Result<(), RunError> {
    let (pair, default_phi, lambda) = ctx.pair(&p.pair)?;
    let phi = ctx.phi(&p.phi, &pair, default_phi)?;
    let rule = QuadratureRule::for_profile(&p.profile, p.nodes)?;
    let c = smoothing_contrast(&pair, &phi, &p.profile, &rule, &p.epsilons)?;
    warn_range(ctx, c.range_defect);
    ctx.write("averaged_ladder.csv", |out| c.averaged.write_csv(out))?;
    ctx.write("single_ladder.csv", |out| c.single.write_csv(out))?;
    ctx.metric("density_sup", &c.averaged.density_sup);
    ctx.metric("density_ratio", c.density_ratio);
    ctx.metric("c_hat", c.c_hat);
    ctx.metric("t0", c.t0);
    ctx.metric("single_max_atom", c.single_max_atom);
    let min_single = c.single.s_values.iter().copied().fold(f64::INFINITY, f64::min);
    ctx.check(CheckRecord::new(
        "contrast-single-atom-bound",
        (c.single_max_atom - min_single).max(0.0),
        1e-12 * c.single_max_atom,
    ));
    match p.arm {
        Arm::Positive => {
            ctx.check(CheckRecord::new("contrast-density-ratio", c.density_ratio, p.density_ratio_tolerance));
        }
        Arm::Negative => {
            let Some(lambda) = lambda else {
                return Err(config_error("the negative arm needs pair source \"negative-control\""));
            };
            let nu = average_spectral_measure(&pair, &phi, &p.profile, &rule)?.measure;
            let atom = nu.restrict(Interval::new(lambda - 1e-9, lambda + 1e-9)?);
            let min_avg = c.averaged.s_values.iter().copied().fold(f64::INFINITY, f64::min);
            ctx.metric("persistent_atom", atom);
            ctx.check(CheckRecord::new("contrast-persistent-atom", (atom - min_avg).max(0.0), 1e-12 * atom));
            let expected = norm_sqr(&phi) * p.profile.mass();
            ctx.check(CheckRecord::new(
                "contrast-atom-weight",
                (atom - expected).abs() / expected,
                crate::quadrature::RULE_TOLERANCE,
            ));
        }
    }
    Ok(())
}

fn run_change_of_variables(ctx: &mut Context, p: &ChangeOfVariablesParams) -> Result<(), RunError> {
    if !(p.delta > 0.0 && p.delta < 1.0) {
        return Err(config_error(format!("delta must lie in (0, 1), got {}", p.delta)));
    }
    let (pair, default_phi, _) = ctx.pair(&p.pair)?;
    let phi = ctx.phi(&p.phi, &pair, default_phi)?;
    warn_range(ctx, pair.range_defect(&phi)?);
    let r = change_of_variables_check(&pair, &phi, &p.profile, p.nodes, p.delta, p.bin_width)?;
    ctx.metric("tanh_side_mass", r.tanh_side_mass);
    ctx.metric("substituted_side_mass", r.substituted_side_mass);
    ctx.metric("discarded_mass", r.discarded_mass);
    ctx.metric("tv_distance", r.tv_distance);
    ctx.check(CheckRecord::new("change-of-variables-tv", r.tv_distance, p.tv_tolerance));
    Ok(())
}

fn run_direct_integral(ctx: &mut Context, p: &DirectIntegralParams) -> Result<(), RunError> {
    let (family, default_f) = match &p.family {
        FamilySpec::Diagonal { fibers, weights } => {
            let ops: Vec<HermitianOperator> = fibers.iter().map(|d| HermitianOperator::diagonal(d)).collect();
            let n = fibers.first().map_or(0, Vec::len);
            let ts = (0..ops.len()).map(|j| j as f64).collect();
            (FiberFamily::new(ops, ts, weights.clone())?, real_vector(&vec![1.0; n]))
        }
        FamilySpec::Pair { pair, ts, weights } => {
            let (pair, phi, _) = ctx.pair(pair)?;
            (FiberFamily::from_pair(&pair, ts.clone(), weights.clone())?, phi)
        }
        FamilySpec::RandomPair { pair, fibers } => {
            let (pair, _, _) = ctx.pair(pair)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed()?.wrapping_add(4));
            let ts = (0..*fibers).map(|_| rng.random_range(-2.0..2.0)).collect();
            let gs = (0..*fibers).map(|_| rng.random_range(0.0..1.0)).collect();
            let n = pair.dim();
            (FiberFamily::from_pair(&pair, ts, gs)?, random_unit_vector(n, ctx.seed()?.wrapping_add(5)))
        }
    };
    let f = match &p.f {
        PhiSpec::Values(v) if v.len() == family.fiber_dim() => real_vector(v),
        PhiSpec::Values(v) => {
            return Err(config_error(format!("f has {} entries, fiber dimension is {}", v.len(), family.fiber_dim())))
        }
        PhiSpec::Named(s) if s == "default" => default_f,
        PhiSpec::Named(s) if s == "random" => random_unit_vector(family.fiber_dim(), ctx.seed()?.wrapping_add(2)),
        PhiSpec::Named(s) => return Err(config_error(format!("unknown f {s:?}"))),
    };
    let mut intervals = p
        .intervals
        .iter()
        .map(|[a, b]| Interval::new(*a, *b).map_err(|e| config_error(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if p.random_intervals > 0 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for fiber in family.fibers() {
            let e = fiber.eigenvalues()?;
            lo = lo.min(e[0]);
            hi = hi.max(e[e.len() - 1]);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed()?.wrapping_add(3));
        for _ in 0..p.random_intervals {
            let a = rng.random_range(lo - 0.5..hi + 0.5);
            let len = rng.random_range(0.0..hi - lo + 1.0);
            intervals.push(Interval::new(a, a + len)?);
        }
    }
    if intervals.is_empty() {
        return Err(config_error("direct-integral needs at least one interval"));
    }
    let mut rows = Vec::new();
    for (i, interval) in intervals.iter().enumerate() {
        let c = decomposition_identity_check(&family, &f, *interval)?;
        let mut record = c.record.clone();
        record.tolerance = p.tolerance * record.tolerance / crate::commutator::DECOMPOSITION_TOLERANCE;
        record.pass = record.discrepancy <= record.tolerance;
        record.check = format!("direct-integral[{i}]");
        rows.push((*interval, c.block_side, c.fiber_side, record.discrepancy));
        ctx.check(record);
    }
    ctx.metric(
        "max_discrepancy",
        rows.iter().map(|r| r.3).fold(0.0, f64::max),
    );
    ctx.write("direct_integral.csv", |out| {
        writeln!(out, "interval_lo,interval_hi,block_side,fiber_side,discrepancy")?;
        for (i, b, f, d) in &rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                format_f64(i.lo()),
                format_f64(i.hi()),
                format_f64(*b),
                format_f64(*f),
                format_f64(*d)
            )?;
        }
        Ok(())
    })
}

fn run_commutator(ctx: &mut Context, p: &CommutatorParams) -> Result<(), RunError> {
    let grid = build_grid(p.n, p.l).map_err(|e| config_error(e.to_string()))?;
    let c = commutator(&grid)?;
    let r = howland_report(&grid)?;
    ctx.write("spectrum.csv", |out| write_spectrum(&c.eigenvalues, out))?;
    ctx.metric("howland", &r);
    ctx.metric("d_imaginary_part", grid.d_imaginary_part());
    ctx.check(CheckRecord::new(
        "commutator-min-eig",
        (-r.min_eigenvalue).max(0.0) / r.norm,
        p.min_eig_tolerance,
    ));
    ctx.check(CheckRecord::new(
        "commutator-nonpositive-fraction",
        1.0 - r.positive_fraction,
        1.0 - p.positive_fraction,
    ));
    ctx.check(CheckRecord::new("commutator-trace", r.trace.abs(), 1e-12 * r.norm.max(1.0)));
    if !p.refinement.is_empty() {
        for &(n, l) in &p.refinement {
            build_grid(n, l).map_err(|e| config_error(e.to_string()))?;
        }
        let refinement = refinement_report(&p.refinement)?;
        let worst = refinement
            .relative_changes
            .iter()
            .map(|c| c.unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max);
        ctx.metric("refinement", &refinement);
        ctx.check(CheckRecord::new("commutator-refinement", worst, p.refinement_tolerance));
    }
    Ok(())
}

fn run_kato_putnam(ctx: &mut Context, p: &KatoPutnamParams) -> Result<(), RunError> {
    let (pair, _, _) = ctx.pair(&p.pair)?;
    let grid = build_grid(p.n, p.l).map_err(|e| config_error(e.to_string()))?;
    if pair.dim() * grid.n() > p.cap {
        return Err(config_error(format!("n·N = {} exceeds the cap {}", pair.dim() * grid.n(), p.cap)));
    }
    let mut identity = kato_putnam_identity(&pair, &grid, p.cap)?;
    identity.tolerance *= p.tolerance / crate::commutator::KRONECKER_TOLERANCE;
    identity.pass = identity.discrepancy <= identity.tolerance;
    ctx.check(identity);
    let r = positivity_report(&pair, &grid)?;
    ctx.metric("positivity", &r);
    ctx.check(CheckRecord::new(
        "kronecker-positivity",
        (-r.min_eigenvalue).max(0.0) / r.scale.max(f64::MIN_POSITIVE),
        p.positivity_tolerance,
    ));
    Ok(())
}

fn run_cyclicity(ctx: &mut Context, p: &CyclicityParams) -> Result<(), RunError> {
    let (pair, _, _) = ctx.pair(&p.pair)?;
    let rank = cyclicity_rank(&pair)?;
    ctx.metric("rank", rank);
    ctx.metric("dim", pair.dim());
    if let Some(expect) = p.expect {
        ctx.check(CheckRecord::new("cyclicity-rank", rank.abs_diff(expect) as f64, 0.0));
    }
    Ok(())
}

fn model(spec: &ModelSpec) -> Result<RandomModel, RunError> {
    RandomModel::new(spec.cells, spec.mesh, spec.site_profile()?, spec.coupling_law(), spec.v0.clone())
        .map_err(|e| config_error(e.to_string()))
}

fn run_ids(ctx: &mut Context, p: &IdsParams) -> Result<(), RunError> {
    let model = model(&p.model)?;
    let sampling = if p.enumerate {
        Sampling::Enumerate
    } else {
        Sampling::MonteCarlo {
            samples: p.samples,
            seed: ctx.seed()?,
        }
    };
    let bins = match (p.bins, p.bin_width) {
        (Some(_), Some(_)) => return Err(config_error("give bins or bin_width, not both")),
        (Some(0), None) => return Err(config_error("bins must be positive")),
        (Some(b), None) => EnergyBins::Count(b),
        (None, Some(w)) => EnergyBins::Width(w),
        (None, None) => EnergyBins::Count(200),
    };
    let est = ids_estimate(&model, sampling, bins).map_err(|e| match e {
        Error::InvalidModel(m) => config_error(m),
        other => RunError::Numerical(other),
    })?;
    ctx.write("ids.csv", |out| est.write_csv(out))?;
    let m = model.mesh() as f64;
    ctx.metric("samples", est.samples);
    ctx.metric("total_mass", est.total_mass());
    ctx.metric("bin_width", est.width);
    ctx.check(CheckRecord::new("ids-trace", (est.total_mass() - m).abs() / m, p.trace_tolerance));
    if p.two_volume {
        let cmp = two_volume_comparison(&model, sampling, est.width)?;
        ctx.write("ids_2m.csv", |out| cmp.large.write_csv(out))?;
        ctx.metric("two_volume_cumulative_sup_difference", cmp.cumulative_sup_difference);
    }
    Ok(())
}

fn run_wegner(ctx: &mut Context, p: &WegnerParams) -> Result<(), RunError> {
    let model = model(&p.model)?;
    let est = ids_estimate(
        &model,
        Sampling::MonteCarlo {
            samples: p.samples,
            seed: ctx.seed()?,
        },
        EnergyBins::Width(p.bin_width),
    )?;
    let r = wegner_report(&est, &p.epsilons)?;
    ctx.write("ids.csv", |out| est.write_csv(out))?;
    ctx.write("ladder.csv", |out| r.continuity.write_csv(out))?;
    ctx.metric("density_sup", &r.continuity.density_sup);
    ctx.metric("density_ratio", r.density_ratio);
    let stable = r.density_ratio.is_finite() && r.density_ratio <= p.stability;
    ctx.metric("stable", stable);
    ctx.check(CheckRecord {
        check: if p.expect_stable { "wegner-stability" } else { "wegner-control-instability" }.into(),
        discrepancy: r.density_ratio,
        tolerance: p.stability,
        pass: stable == p.expect_stable,
    });
    Ok(())
}

/// Report of a config that parsed and validated, without running it.
pub fn describe(config: &ExperimentConfig, seed_override: Option<u64>) -> Result<Value, RunError> {
    let mut effective = config.clone();
    effective.seed = seed_override.or(config.seed);
    effective.validate()?;
    Ok(json!({
        "experiment": config.experiment.kind(),
        "id": config.id,
        "schema_version": config.schema_version,
        "seed": effective.seed,
        "randomized": config.experiment.is_randomized(),
    }))
}
