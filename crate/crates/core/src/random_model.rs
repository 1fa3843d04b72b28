//! One-dimensional random Schrödinger operator `H^ω = −Δ + Σ ω_n u(· − n) + V₀`
//! on `M` periodic unit cells of `m` mesh points, and Monte Carlo estimation
//! of its integrated density of states through `Tr(χ E_H(I) χ)`.

use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::averaging::{average_spectral_measure, AveragedMeasure};
use crate::error::{Error, Result};
use crate::measure::{continuity_ladder, format_f64, BinnedMeasure, ContinuityReport, PointMeasure};
use crate::profile::WeightProfile;
use crate::quadrature::QuadratureRule;
use crate::spectral::{HermitianOperator, OperatorPair, Vector};
use crate::C64;

/// Law of the i.i.d. couplings `ω_n`.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingLaw {
    /// Density `h`, normalized internally.
    Density(WeightProfile),
    /// Finitely many outcomes with probabilities summing to one.
    Discrete { values: Vec<f64>, probs: Vec<f64> },
}

impl CouplingLaw {
    pub fn point_mass(value: f64) -> Self {
        Self::Discrete {
            values: vec![value],
            probs: vec![1.0],
        }
    }

    pub fn two_point(a: f64, b: f64, p: f64) -> Self {
        Self::Discrete {
            values: vec![a, b],
            probs: vec![p, 1.0 - p],
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Density(h) => {
                if !(h.mass() > 0.0) {
                    return Err(Error::InvalidModel("coupling density has zero mass".into()));
                }
            }
            Self::Discrete { values, probs } => {
                if values.is_empty() || values.len() != probs.len() {
                    return Err(Error::InvalidModel("discrete law needs one probability per value".into()));
                }
                if values.iter().any(|v| !v.is_finite()) || probs.iter().any(|p| !(*p >= 0.0)) {
                    return Err(Error::InvalidModel("discrete law needs finite values and nonnegative probabilities".into()));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidModel(format!("probabilities sum to {total}, not 1")));
                }
            }
        }
        Ok(())
    }

    /// Inverse CDF at `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        match self {
            Self::Density(h) => h.quantile(u),
            Self::Discrete { values, probs } => {
                let mut acc = 0.0;
                for (v, p) in values.iter().zip(probs) {
                    acc += p;
                    if u < acc {
                        return Ok(*v);
                    }
                }
                Ok(*values.last().expect("validated nonempty"))
            }
        }
    }

    /// Whether `x` lies in the support of the law.
    pub fn supports(&self, x: f64) -> bool {
        match self {
            Self::Density(h) => {
                let (a, b) = h.support();
                a <= x && x <= b
            }
            Self::Discrete { values, probs } => values.iter().zip(probs).any(|(v, p)| *v == x && *p > 0.0),
        }
    }
}

/// Single-site profile on one cell's mesh.
#[derive(Debug, Clone, PartialEq)]
pub enum SiteProfile {
    /// `u ≡ 1` on the cell.
    Indicator,
    /// Tabulated values at the `m` mesh points.
    Bump(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct RandomModel {
    cells: usize,
    mesh: usize,
    u: Vec<f64>,
    law: CouplingLaw,
    v0: Option<Vec<f64>>,
}

impl RandomModel {
    /// `u` must be nonnegative and finite; `u ≡ 0` is accepted (it decouples
    /// the disorder) and flagged by [`RandomModel::is_degenerate`].
    pub fn new(cells: usize, mesh: usize, u: SiteProfile, law: CouplingLaw, v0: Option<Vec<f64>>) -> Result<Self> {
        if cells == 0 || mesh == 0 {
            return Err(Error::InvalidModel("cells and mesh must be positive".into()));
        }
        let u = match u {
            SiteProfile::Indicator => vec![1.0; mesh],
            SiteProfile::Bump(values) => values,
        };
        if u.len() != mesh {
            return Err(Error::DimensionMismatch {
                expected: mesh,
                got: u.len(),
            });
        }
        if u.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidModel("single-site profile must be nonnegative and bounded".into()));
        }
        if let Some(v) = &v0 {
            if v.len() != mesh {
                return Err(Error::DimensionMismatch {
                    expected: mesh,
                    got: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidModel("periodic background must be finite".into()));
            }
        }
        law.validate()?;
        Ok(Self { cells, mesh, u, law, v0 })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn mesh(&self) -> usize {
        self.mesh
    }

    /// `M·m`.
    pub fn dim(&self) -> usize {
        self.cells * self.mesh
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn law(&self) -> &CouplingLaw {
        &self.law
    }

    pub fn v0(&self) -> Option<&[f64]> {
        self.v0.as_deref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.u.iter().all(|&x| x == 0.0)
    }

    /// Same model on a different number of cells.
    pub fn with_cells(&self, cells: usize) -> Result<Self> {
        Self::new(cells, self.mesh, SiteProfile::Bump(self.u.clone()), self.law.clone(), self.v0.clone())
    }

    /// Same model with a different law.
    pub fn with_law(&self, law: CouplingLaw) -> Result<Self> {
        Self::new(self.cells, self.mesh, SiteProfile::Bump(self.u.clone()), law, self.v0.clone())
    }

    /// Number of couplings outside the support of the law.
    pub fn outside_support(&self, omega: &[f64]) -> usize {
        omega.iter().filter(|&&w| !self.law.supports(w)).count()
    }
}

/// Periodic `(2f(x) − f(x+Δx) − f(x−Δx))/Δx²` plus `ω_{⌊x⌋} u + V₀`.
pub fn build_hamiltonian(model: &RandomModel, omega: &[f64]) -> Result<HermitianOperator> {
    if omega.len() != model.cells {
        return Err(Error::DimensionMismatch {
            expected: model.cells,
            got: omega.len(),
        });
    }
    let n = model.dim();
    let m = model.mesh;
    let scale = (m * m) as f64;
    let mut h = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        h[(i, i)] += 2.0 * scale;
        h[(i, (i + 1) % n)] -= scale;
        h[(i, (i + n - 1) % n)] -= scale;
        h[(i, i)] += omega[i / m] * model.u[i % m];
        if let Some(v) = &model.v0 {
            h[(i, i)] += v[i % m];
        }
    }
    HermitianOperator::new(h.map(|x| C64::new(x, 0.0)))
}

/// `M` draws through the inverse CDF of the law; the `n`-th coupling of
/// sample `index` is the `n`-th uniform on ChaCha stream `index` of `seed`.
pub fn sample_couplings(model: &RandomModel, seed: u64, index: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..model.cells).map(|_| model.law.quantile(rng.random::<f64>())).collect()
}

/// `I ↦ Tr(χ E_H(I) χ)` with `χ` the coordinate projection on the mesh points
/// of cell 0.
pub fn local_trace_measure(h: &HermitianOperator, model: &RandomModel) -> Result<PointMeasure> {
    local_trace_measure_at(h, model, 0)
}

/// As [`local_trace_measure`] with `χ` on cell `cell`.
pub fn local_trace_measure_at(h: &HermitianOperator, model: &RandomModel, cell: usize) -> Result<PointMeasure> {
    h.check_dim(model.dim())?;
    if cell >= model.cells {
        return Err(Error::InvalidArgument(format!("cell {cell} outside 0..{}", model.cells)));
    }
    let eig = h.eigh()?;
    let rows = cell * model.mesh..(cell + 1) * model.mesh;
    let atoms = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let w: f64 = rows.clone().map(|r| eig.eigenvectors[(r, i)].norm_sqr()).sum();
            (l, w)
        })
        .collect();
    Ok(PointMeasure::canonicalize(atoms))
}

/// How samples are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    MonteCarlo { samples: usize, seed: u64 },
    /// Every outcome of a discrete law with its probability.
    Enumerate,
}

/// Energy binning of an estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnergyBins {
    /// `count` bins over `[min eig − 0.1, max eig + 0.1]`.
    Count(usize),
    /// Bins of the given width starting at `min eig − 0.1`.
    Width(f64),
    /// Explicit grid.
    Fixed { origin: f64, width: f64, count: usize },
}

pub const ENERGY_MARGIN: f64 = 0.1;

/// Sample-averaged binned local trace measure.
#[derive(Debug, Clone, Serialize)]
pub struct IdsEstimate {
    pub origin: f64,
    pub width: f64,
    pub masses: Vec<f64>,
    pub std_err: Vec<f64>,
    pub samples: usize,
    pub mesh: usize,
}

impl IdsEstimate {
    pub fn binned(&self) -> Result<BinnedMeasure> {
        BinnedMeasure::new(self.origin, self.width, self.masses.clone())
    }

    pub fn cumulative(&self) -> Vec<f64> {
        self.masses
            .iter()
            .scan(0.0, |acc, m| {
                *acc += m;
                Some(*acc)
            })
            .collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// CSV `bin_left,mass,std_err,cumulative`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bin_left,mass,std_err,cumulative")?;
        for (i, ((m, e), c)) in self.masses.iter().zip(&self.std_err).zip(self.cumulative()).enumerate() {
            let left = self.origin + self.width * i as f64;
            writeln!(out, "{},{},{},{}", format_f64(left), format_f64(*m), format_f64(*e), format_f64(c))?;
        }
        Ok(())
    }
}

/// Per-sample local trace measures with their probability weights.
fn collect_samples(model: &RandomModel, sampling: Sampling) -> Result<Vec<(f64, PointMeasure)>> {
    let outcomes: Vec<(f64, Vec<f64>)> = match sampling {
        Sampling::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("at least one sample is required".into()));
            }
            let w = 1.0 / samples as f64;
            (0..samples as u64)
                .map(|i| Ok((w, sample_couplings(model, seed, i)?)))
                .collect::<Result<_>>()?
        }
        Sampling::Enumerate => enumerate_outcomes(model)?,
    };
    outcomes
        .into_par_iter()
        .map(|(w, omega)| Ok((w, local_trace_measure(&build_hamiltonian(model, &omega)?, model)?)))
        .collect()
}

/// All `ω ∈ values^M` with `Π probs`, in lexicographic order.
fn enumerate_outcomes(model: &RandomModel) -> Result<Vec<(f64, Vec<f64>)>> {
    let CouplingLaw::Discrete { values, probs } = &model.law else {
        return Err(Error::InvalidModel("outcome enumeration needs a discrete law".into()));
    };
    let k = values.len();
    let total = k
        .checked_pow(model.cells as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::SizeCap {
            size: usize::MAX,
            cap: 1 << 20,
        })?;
    Ok((0..total)
        .map(|mut code| {
            let mut omega = vec![0.0; model.cells];
            let mut p = 1.0;
            for slot in omega.iter_mut().rev() {
                *slot = values[code % k];
                p *= probs[code % k];
                code /= k;
            }
            (p, omega)
        })
        .collect())
}

fn resolve_bins(samples: &[(f64, PointMeasure)], bins: EnergyBins) -> Result<(f64, f64, usize)> {
    if let EnergyBins::Fixed { origin, width, count } = bins {
        if !(width > 0.0) || count == 0 {
            return Err(Error::NonPositiveWidth(width));
        }
        return Ok((origin, width, count));
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (_, m) in samples {
        if let Some(i) = m.support_hull() {
            lo = lo.min(i.lo());
            hi = hi.max(i.hi());
        }
    }
    if !lo.is_finite() {
        lo = 0.0;
        hi = 0.0;
    }
    let (origin, top) = (lo - ENERGY_MARGIN, hi + ENERGY_MARGIN);
    match bins {
        EnergyBins::Count(count) if count > 0 => Ok((origin, (top - origin) / count as f64, count)),
        EnergyBins::Width(width) if width > 0.0 => Ok((origin, width, ((top - origin) / width).ceil() as usize)),
        EnergyBins::Count(_) => Err(Error::InvalidArgument("bin count must be positive".into())),
        EnergyBins::Width(w) | EnergyBins::Fixed { width: w, .. } => Err(Error::NonPositiveWidth(w)),
    }
}

fn accumulate(model: &RandomModel, samples: &[(f64, PointMeasure)], bins: EnergyBins) -> Result<IdsEstimate> {
    let (origin, width, count) = resolve_bins(samples, bins)?;
    let binned: Vec<(f64, BinnedMeasure)> = samples
        .par_iter()
        .map(|(w, m)| Ok((*w, m.bin(width, origin, origin + width * count as f64)?)))
        .collect::<Result<_>>()?;
    let mut mean = vec![0.0; count];
    for (w, b) in &binned {
        for (acc, x) in mean.iter_mut().zip(b.masses()) {
            *acc += w * x;
        }
    }
    // std err from the weighted variance; for Monte Carlo this is the usual
    // sample variance with S − 1 over S
    let s = samples.len();
    let mut std_err = vec![0.0; count];
    if s > 1 {
        for (w, b) in &binned {
            for ((acc, x), m) in std_err.iter_mut().zip(b.masses()).zip(&mean) {
                *acc += w * (x - m) * (x - m);
            }
        }
        let correction = s as f64 / (s - 1) as f64;
        for e in &mut std_err {
            *e = (*e * correction / s as f64).sqrt();
        }
    }
    Ok(IdsEstimate {
        origin,
        width,
        masses: mean,
        std_err,
        samples: s,
        mesh: model.mesh,
    })
}

/// Average of binned local trace measures over the sampled couplings.
pub fn ids_estimate(model: &RandomModel, sampling: Sampling, bins: EnergyBins) -> Result<IdsEstimate> {
    let samples = collect_samples(model, sampling)?;
    accumulate(model, &samples, bins)
}

/// `ids_estimate` for a fixed coupling vector (one sample).
pub fn ids_for_couplings(model: &RandomModel, omega: &[f64], bins: EnergyBins) -> Result<IdsEstimate> {
    let sample = (1.0, local_trace_measure(&build_hamiltonian(model, omega)?, model)?);
    accumulate(model, &[sample], bins)
}

/// Estimates at `M` and `2M` cells on a common grid.
#[derive(Debug, Clone, Serialize)]
pub struct VolumeComparison {
    pub small: IdsEstimate,
    pub large: IdsEstimate,
    /// `sup_E |N_M(E) − N_{2M}(E)| / m`.
    pub cumulative_sup_difference: f64,
}

pub fn two_volume_comparison(model: &RandomModel, sampling: Sampling, width: f64) -> Result<VolumeComparison> {
    let doubled = model.with_cells(2 * model.cells)?;
    let a = collect_samples(model, sampling)?;
    let b = collect_samples(&doubled, sampling)?;
    let all: Vec<(f64, PointMeasure)> = a.iter().chain(&b).cloned().collect();
    let (origin, width, count) = resolve_bins(&all, EnergyBins::Width(width))?;
    let grid = EnergyBins::Fixed { origin, width, count };
    let small = accumulate(model, &a, grid)?;
    let large = accumulate(&doubled, &b, grid)?;
    let cumulative_sup_difference = small
        .cumulative()
        .iter()
        .zip(large.cumulative())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / model.mesh as f64;
    Ok(VolumeComparison {
        small,
        large,
        cumulative_sup_difference,
    })
}

/// `(A, B)` with `A = H^ω` at `ω₀ = 0` and `B` multiplication by `u` on cell 0.
pub fn single_site_pair(model: &RandomModel, omega_rest: &[f64]) -> Result<OperatorPair> {
    let mut omega = omega_rest.to_vec();
    if omega.len() != model.cells {
        return Err(Error::DimensionMismatch {
            expected: model.cells,
            got: omega.len(),
        });
    }
    omega[0] = 0.0;
    let a = build_hamiltonian(model, &omega)?;
    let mut diag = vec![0.0; model.dim()];
    diag[..model.mesh].copy_from_slice(&model.u);
    OperatorPair::new(a, HermitianOperator::diagonal(&diag))
}

/// `∫ ρ_{A + tB}^Φ h(t) dt` over the coupling of cell 0.
pub fn single_site_average(
    model: &RandomModel,
    omega_rest: &[f64],
    phi: &Vector,
    rule: &QuadratureRule,
) -> Result<AveragedMeasure> {
    let CouplingLaw::Density(h) = &model.law else {
        return Err(Error::InvalidModel("single-site averaging needs a coupling density".into()));
    };
    let pair = single_site_pair(model, omega_rest)?;
    average_spectral_measure(&pair, phi, h, rule)
}

pub const WEGNER_STABILITY: f64 = 2.0;
pub const WEGNER_LADDER: [f64; 3] = [0.2, 0.1, 0.05];
/// Energy bin for Wegner runs: 1/20 of the finest rung, so rounding a window
/// up to whole bins moves it by at most 5%.
pub const DEFAULT_WEGNER_BIN: f64 = 0.0025;

#[derive(Debug, Clone, Serialize)]
pub struct WegnerReport {
    pub continuity: ContinuityReport,
    pub density_ratio: f64,
    /// `density_sup` finite and within ×2 across the ladder.
    pub stable: bool,
}

pub fn wegner_report(est: &IdsEstimate, epsilons: &[f64]) -> Result<WegnerReport> {
    let continuity = continuity_ladder(&est.binned()?, epsilons)?;
    let density_ratio = continuity.density_ratio();
    let finite = continuity.density_sup.iter().all(|d| d.is_finite());
    Ok(WegnerReport {
        stable: finite && density_ratio <= WEGNER_STABILITY,
        density_ratio,
        continuity,
    })
}

/// Eigenvalues `(2 − 2cos(2πk/(Mm)))·m²` of the free periodic Laplacian.
pub fn circulant_spectrum(cells: usize, mesh: usize) -> Vec<f64> {
    let n = cells * mesh;
    let scale = (mesh * mesh) as f64;
    let mut out: Vec<f64> = (0..n)
        .map(|k| (2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()) * scale)
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::CONTRAST_LADDER;
    use crate::measure::{continuity_ladder, Interval};
    use crate::spectral::cyclicity_rank;
    use proptest::prelude::*;

    fn uniform_model(cells: usize, mesh: usize) -> RandomModel {
        RandomModel::new(
            cells,
            mesh,
            SiteProfile::Indicator,
            CouplingLaw::Density(WeightProfile::uniform(0.0, 1.0).unwrap()),
            None,
        )
        .unwrap()
    }

    #[test]
    fn free_laplacian_is_circulant() {
        let model = uniform_model(3, 4);
        let eig = build_hamiltonian(&model, &[0.0; 3]).unwrap().eigenvalues().unwrap();
        for (x, y) in eig.iter().zip(circulant_spectrum(3, 4)) {
            assert!((x - y).abs() < 1e-10 * 64.0);
        }
        for (cells, mesh) in [(1, 1), (1, 2), (2, 1)] {
            let model = uniform_model(cells, mesh);
            let eig = build_hamiltonian(&model, &vec![0.0; cells]).unwrap().eigenvalues().unwrap();
            for (x, y) in eig.iter().zip(circulant_spectrum(cells, mesh)) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn constant_coupling_shifts_spectrum() {
        let model = uniform_model(3, 4);
        let free = build_hamiltonian(&model, &[0.0; 3]).unwrap().eigenvalues().unwrap();
        let shifted = build_hamiltonian(&model, &[0.3; 3]).unwrap().eigenvalues().unwrap();
        for (x, y) in free.iter().zip(&shifted) {
            assert!((y - x - 0.3).abs() < 1e-10);
        }
        let flat = RandomModel::new(3, 4, SiteProfile::Bump(vec![0.0; 4]), model.law().clone(), None).unwrap();
        assert!(flat.is_degenerate());
        assert_eq!(
            build_hamiltonian(&flat, &[0.1, 0.5, 0.9]).unwrap().matrix(),
            build_hamiltonian(&flat, &[0.0; 3]).unwrap().matrix()
        );
        assert!(build_hamiltonian(&model, &[0.0; 2]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_has_the_right_mean() {
        let model = uniform_model(10_000, 1);
        let a = sample_couplings(&model, 7, 3).unwrap();
        assert_eq!(a, sample_couplings(&model, 7, 3).unwrap());
        assert_ne!(a, sample_couplings(&model, 7, 4).unwrap());
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        assert!((mean - 0.5).abs() < 0.02);
        let small = uniform_model(5, 1);
        assert_eq!(sample_couplings(&small, 7, 3).unwrap()[..], a[..5]);
        let point = model.with_law(CouplingLaw::point_mass(0.4)).unwrap();
        assert!(sample_couplings(&point, 1, 0).unwrap().iter().all(|&w| w == 0.4));
        assert_eq!(model.outside_support(&[0.5, 1.5, -0.1]), 2);
    }

    #[test]
    fn bad_laws_are_rejected() {
        let zero = WeightProfile::table(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert!(RandomModel::new(2, 2, SiteProfile::Indicator, CouplingLaw::Density(zero), None).is_err());
        let bad = CouplingLaw::Discrete {
            values: vec![0.0, 1.0],
            probs: vec![0.5, 0.6],
        };
        assert!(RandomModel::new(2, 2, SiteProfile::Indicator, bad, None).is_err());
        assert!(RandomModel::new(2, 2, SiteProfile::Bump(vec![1.0, -1.0]), CouplingLaw::point_mass(0.0), None).is_err());
    }

    #[test]
    fn local_trace_examples() {
        let single = uniform_model(1, 6);
        let mu = local_trace_measure(&build_hamiltonian(&single, &[0.3]).unwrap(), &single).unwrap();
        assert!((mu.total_mass() - 6.0).abs() < 1e-10);
        // distinct eigenvalues at M = 1 except the circulant pairs
        let model = uniform_model(4, 4);
        let free = local_trace_measure(&build_hamiltonian(&model, &[0.0; 4]).unwrap(), &model).unwrap();
        assert!((free.total_mass() - 4.0).abs() < 1e-10);
        let spectrum = circulant_spectrum(4, 4);
        for (x, w) in free.atoms() {
            let multiplicity = spectrum.iter().filter(|&&l| (l - x).abs() < 1e-8).count();
            assert!((w - multiplicity as f64 * 4.0 / 16.0).abs() < 1e-10, "{x}: {w}");
        }
    }

    #[test]
    fn ids_examples() {
        let model = uniform_model(2, 4);
        let zero = model.with_law(CouplingLaw::point_mass(0.0)).unwrap();
        let est = ids_estimate(&zero, Sampling::MonteCarlo { samples: 1, seed: 1 }, EnergyBins::Count(50)).unwrap();
        assert!((est.total_mass() - 4.0).abs() < 1e-10);
        let cumulative = est.cumulative();
        assert!(cumulative.windows(2).all(|w| w[1] >= w[0]));
        let spectrum = circulant_spectrum(2, 4);
        let b = est.binned().unwrap();
        let (lo, hi) = (spectrum[0] - 1e-9, spectrum[0] + 1e-9);
        assert!(b.restrict(Interval::new(lo - est.width, hi + est.width).unwrap()) > 0.0);

        let flat = RandomModel::new(2, 4, SiteProfile::Bump(vec![0.0; 4]), model.law().clone(), None).unwrap();
        let est = ids_estimate(&flat, Sampling::MonteCarlo { samples: 20, seed: 3 }, EnergyBins::Count(40)).unwrap();
        assert!(est.std_err.iter().all(|&e| e < 1e-12));

        let mut out = Vec::new();
        est.write_csv(&mut out).unwrap();
        assert!(String::from_utf8(out).unwrap().starts_with("bin_left,mass,std_err,cumulative\n"));
    }

    #[test]
    fn standard_error_scales_with_samples() {
        let model = uniform_model(4, 4);
        let grid = EnergyBins::Fixed {
            origin: -0.5,
            width: 2.0,
            count: 40,
        };
        let a = ids_estimate(&model, Sampling::MonteCarlo { samples: 400, seed: 5 }, grid).unwrap();
        let b = ids_estimate(&model, Sampling::MonteCarlo { samples: 800, seed: 5 }, grid).unwrap();
        let (sa, sb): (f64, f64) = (a.std_err.iter().sum(), b.std_err.iter().sum());
        let ratio = sb / sa;
        assert!((ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.3 * std::f64::consts::FRAC_1_SQRT_2, "{ratio}");
    }

    #[test]
    fn enumeration_weights_sum_to_one() {
        let model = uniform_model(3, 2).with_law(CouplingLaw::two_point(0.0, 1.0, 0.3)).unwrap();
        let outcomes = enumerate_outcomes(&model).unwrap();
        assert_eq!(outcomes.len(), 8);
        assert!((outcomes.iter().map(|(p, _)| p).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(enumerate_outcomes(&uniform_model(2, 2)).is_err());
    }

    #[test]
    fn single_site_examples() {
        let model = uniform_model(2, 8);
        let omega = sample_couplings(&model, 9, 0).unwrap();
        let pair = single_site_pair(&model, &omega).unwrap();
        assert_eq!(cyclicity_rank(&pair).unwrap(), 16);
        let mut phi = Vector::zeros(16);
        phi[0] = C64::new(1.0, 0.0);
        let h = WeightProfile::uniform(0.0, 1.0).unwrap();
        let rule = QuadratureRule::for_profile(&h, 2000).unwrap();
        let nu = single_site_average(&model, &omega, &phi, &rule).unwrap();
        assert!(!nu.outside_range());
        let report = continuity_ladder(&nu.measure, &CONTRAST_LADDER).unwrap();
        assert!(report.density_ratio() <= 4.0, "{report:?}");

        let flat = RandomModel::new(2, 8, SiteProfile::Bump(vec![0.0; 8]), model.law().clone(), None).unwrap();
        let zero = single_site_average(&flat, &omega, &Vector::zeros(16), &rule).unwrap();
        assert_eq!(zero.measure.total_mass(), 0.0);
    }

    #[test]
    fn wegner_empty_bins() {
        let est = IdsEstimate {
            origin: 0.0,
            width: 0.05,
            masses: vec![0.0; 40],
            std_err: vec![0.0; 40],
            samples: 1,
            mesh: 4,
        };
        let r = wegner_report(&est, &WEGNER_LADDER).unwrap();
        assert!(r.continuity.s_values.iter().all(|&s| s == 0.0));
    }

    #[test]
    fn two_volumes_share_a_grid() {
        let model = uniform_model(3, 4);
        let c = two_volume_comparison(&model, Sampling::MonteCarlo { samples: 10, seed: 2 }, 0.5).unwrap();
        assert_eq!(c.small.origin, c.large.origin);
        assert_eq!(c.small.masses.len(), c.large.masses.len());
        assert!(c.cumulative_sup_difference.is_finite());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn raising_a_coupling_raises_every_eigenvalue(
            omega in proptest::collection::vec(0.0f64..1.0, 3),
            site in 0usize..3,
            bump in 0.0f64..1.0,
            with_v0 in any::<bool>(),
        ) {
            let v0 = with_v0.then(|| vec![0.5, -0.2, 0.1, 0.0]);
            let model = RandomModel::new(3, 4, SiteProfile::Bump(vec![0.2, 1.0, 0.7, 0.0]),
                CouplingLaw::Density(WeightProfile::uniform(0.0, 2.0).unwrap()), v0).unwrap();
            let lower = build_hamiltonian(&model, &omega).unwrap().eigenvalues().unwrap();
            let mut raised = omega.clone();
            raised[site] += bump;
            let upper = build_hamiltonian(&model, &raised).unwrap().eigenvalues().unwrap();
            for (l, u) in lower.iter().zip(&upper) {
                prop_assert!(*u >= *l - 1e-10);
            }
        }

        #[test]
        fn translation_covariance_and_trace(
            omega in proptest::collection::vec(0.0f64..1.0, 4),
            with_v0 in any::<bool>(),
        ) {
            let v0 = with_v0.then(|| vec![0.3, 0.0, -0.3]);
            let model = RandomModel::new(4, 3, SiteProfile::Bump(vec![1.0, 0.5, 0.0]),
                CouplingLaw::Density(WeightProfile::uniform(0.0, 1.0).unwrap()), v0).unwrap();
            let mut rolled = omega.clone();
            rolled.rotate_right(1);
            let a = local_trace_measure(&build_hamiltonian(&model, &omega).unwrap(), &model).unwrap();
            let b = local_trace_measure_at(&build_hamiltonian(&model, &rolled).unwrap(), &model, 1).unwrap();
            prop_assert!((a.total_mass() - 3.0).abs() < 1e-10);
            prop_assert!((b.total_mass() - 3.0).abs() < 1e-10);
            let origin = a.locations()[0].min(b.locations()[0]) - 1.0;
            let x = a.bin_linear(0.05, origin, 1000).unwrap();
            let y = b.bin_linear(0.05, origin, 1000).unwrap();
            prop_assert!(x.l1_distance(&y).unwrap() < 1e-10);
        }
    }
}
