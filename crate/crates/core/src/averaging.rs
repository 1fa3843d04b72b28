//! Spectral averaging: `ν = ∫ ρ_{A+tB}^Φ h(t) dt` by quadrature, the
//! `A + tanh(t)·B` family, the substitution `s = tanh t` that links the two,
//! and the closed-form one-dimensional case used as an oracle.

use rayon::prelude::*;
use serde::Serialize;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fixtures::{random_hermitian, random_pair, random_psd, random_unit_vector, range_vector};
use crate::measure::{continuity_ladder, ContinuityReport, PointMeasure};
use crate::profile::WeightProfile;
use crate::quadrature::{gauss_legendre, QuadratureRule};
use crate::spectral::{norm_sqr, HermitianOperator, OperatorPair, Vector};
use crate::C64;

/// Averaged measure together with how far `Φ` sits from `Range(B)`.
#[derive(Debug, Clone)]
pub struct AveragedMeasure {
    pub measure: PointMeasure,
    /// `‖Φ − P_{Range B}Φ‖ / ‖Φ‖`; above 1e-10 the absolute-continuity
    /// conclusion is not expected to hold.
    pub range_defect: f64,
}

impl AveragedMeasure {
    pub fn outside_range(&self) -> bool {
        self.range_defect > crate::spectral::RANK_TOLERANCE
    }
}

/// `Σ_j c_j ρ_{A + s_j B}^Φ` over `(s_j, c_j)` pairs.
///
/// Nodes are diagonalized in parallel; the per-node atom lists are gathered
/// in node order and canonicalized once, so the result is bit-identical to a
/// sequential evaluation.
pub fn average_over_couplings(pair: &OperatorPair, phi: &Vector, couplings: &[(f64, f64)]) -> Result<PointMeasure> {
    if phi.len() != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: pair.dim(),
            got: phi.len(),
        });
    }
    if let Some(&(_, c)) = couplings.iter().find(|(_, c)| !(*c >= 0.0)) {
        return Err(Error::NegativeWeight(c));
    }
    if norm_sqr(phi) == 0.0 {
        return Ok(PointMeasure::zero());
    }
    let per_node: Vec<Vec<(f64, f64)>> = couplings
        .par_iter()
        .filter(|(_, c)| *c > 0.0)
        .map(|&(s, c)| {
            let eig = pair.at(s).eigh()?;
            Ok(eig
                .spectral_atoms(phi)?
                .into_iter()
                .map(|(l, w)| (l, w * c))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(PointMeasure::canonicalize(per_node.into_iter().flatten().collect()))
}

/// `ν ≈ Σ_j w_j h(t_j) ρ_{A + t_j B}^Φ`.
pub fn average_spectral_measure(
    pair: &OperatorPair,
    phi: &Vector,
    h: &WeightProfile,
    rule: &QuadratureRule,
) -> Result<AveragedMeasure> {
    let range_defect = pair.range_defect(phi)?;
    let couplings: Vec<(f64, f64)> = rule.iter().map(|(t, w)| (t, w * h.density(t))).collect();
    Ok(AveragedMeasure {
        measure: average_over_couplings(pair, phi, &couplings)?,
        range_defect,
    })
}

/// `Σ_j w_j g(t_j) ρ_{A + tanh(t_j) B}^Φ`; `g` stands for `|g|²`.
pub fn tanh_family_average(
    pair: &OperatorPair,
    phi: &Vector,
    g: &WeightProfile,
    rule: &QuadratureRule,
) -> Result<AveragedMeasure> {
    let range_defect = pair.range_defect(phi)?;
    let couplings: Vec<(f64, f64)> = rule.iter().map(|(t, w)| (t.tanh(), w * g.density(t))).collect();
    Ok(AveragedMeasure {
        measure: average_over_couplings(pair, phi, &couplings)?,
        range_defect,
    })
}

/// Closed-form `ν` for the one-dimensional family `a + t·b` with `Φ = 1`:
/// `ρ = δ_{a+tb}`, so `ν` has density `h((s − a)/b)/b`.
#[derive(Debug, Clone)]
pub struct ScalarOracle {
    a: f64,
    b: f64,
    h: WeightProfile,
}

pub fn scalar_oracle_density(a: f64, b: f64, h: &WeightProfile) -> Result<ScalarOracle> {
    if !(b > 0.0) || !b.is_finite() || !a.is_finite() {
        return Err(Error::InvalidArgument(format!("scalar oracle needs b > 0, got {b}")));
    }
    Ok(ScalarOracle { a, b, h: h.clone() })
}

impl ScalarOracle {
    pub fn density(&self, s: f64) -> f64 {
        self.h.density((s - self.a) / self.b) / self.b
    }

    pub fn support(&self) -> (f64, f64) {
        let (lo, hi) = self.h.support();
        (self.a + self.b * lo, self.a + self.b * hi)
    }

    pub fn mass(&self) -> f64 {
        self.h.mass()
    }

    /// `ν([lo, hi])` through the CDF of `h`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        self.h.cdf((hi - self.a) / self.b) - self.h.cdf((lo - self.a) / self.b)
    }

    /// Linear-binned masses of the oracle density on `count` bins of width
    /// `eps` from `origin`, matching [`PointMeasure::bin_linear`]: bin `i`
    /// collects `∫ density · k_i` with `k_i` the hat function on neighbouring
    /// bin centres, outer bins clamped. Integrated with 8-point Gauss panels
    /// split at every kink of the integrand.
    pub fn linear_binned(&self, eps: f64, origin: f64, count: usize) -> Vec<f64> {
        let (x, w) = gauss_legendre(8);
        let mut kinks: Vec<f64> = vec![self.support().0, self.support().1];
        kinks.extend(self.h.breakpoints().iter().map(|t| self.a + self.b * t));
        let integrate = |lo: f64, hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
            let mut edges = vec![lo];
            edges.extend(kinks.iter().copied().filter(|&k| lo < k && k < hi));
            edges.push(hi);
            edges.sort_by(f64::total_cmp);
            edges
                .windows(2)
                .map(|e| {
                    let half = 0.5 * (e[1] - e[0]);
                    let mid = 0.5 * (e[1] + e[0]);
                    x.iter().zip(&w).map(|(xi, wi)| wi * half * f(mid + half * xi)).sum::<f64>()
                })
                .sum()
        };
        let centre = |i: usize| origin + eps * (i as f64 + 0.5);
        let mut out = vec![0.0; count];
        out[0] += integrate(origin, centre(0), &|s| self.density(s));
        out[count - 1] += integrate(centre(count - 1), origin + eps * count as f64, &|s| self.density(s));
        for i in 0..count.saturating_sub(1) {
            let (c0, c1) = (centre(i), centre(i + 1));
            out[i] += integrate(c0, c1, &|s| self.density(s) * (c1 - s) / eps);
            out[i + 1] += integrate(c0, c1, &|s| self.density(s) * (s - c0) / eps);
        }
        out
    }
}

/// Outcome of comparing the two sides of the substitution `s = tanh t`.
#[derive(Debug, Clone, Serialize)]
pub struct ChangeOfVariablesReport {
    /// `½ Σ |ν_tanh(bin) − ν_s(bin)|` after linear binning.
    pub tv_distance: f64,
    pub tanh_side_mass: f64,
    pub substituted_side_mass: f64,
    /// `∫ g` over the `t` lost to the cut `|s| ≤ 1 − δ`.
    pub discarded_mass: f64,
    pub bin_width: f64,
    pub bins: usize,
    pub nodes: usize,
}

pub const DEFAULT_CUTOFF: f64 = 1e-6;
pub const DEFAULT_COMPARISON_BIN: f64 = 0.01;

/// Computes `∫ ρ_{A + tanh t·B}^Φ g(t) dt` on `g`'s support and
/// `∫ ρ_{A + sB}^Φ g(artanh s)/(1 − s²) ds` on its image under `tanh`
/// (clipped to `|s| ≤ 1 − δ`) with independent rules of `nodes` points each,
/// then compares them bin by bin.
pub fn change_of_variables_check(
    pair: &OperatorPair,
    phi: &Vector,
    g: &WeightProfile,
    nodes: usize,
    delta: f64,
    bin_width: f64,
) -> Result<ChangeOfVariablesReport> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("cutoff δ must lie in (0, 1), got {delta}")));
    }
    if !(bin_width > 0.0) {
        return Err(Error::NonPositiveWidth(bin_width));
    }
    let t_rule = QuadratureRule::for_profile(g, nodes)?;
    let lhs = tanh_family_average(pair, phi, g, &t_rule)?.measure;

    let (a, b) = g.support();
    let lo = a.tanh().max(-1.0 + delta);
    let hi = b.tanh().min(1.0 - delta);
    let discarded_mass = if lo > a.tanh() { g.cdf(lo.atanh()) } else { 0.0 }
        + if hi < b.tanh() { g.mass() - g.cdf(hi.atanh()) } else { 0.0 };
    let rhs = if lo < hi {
        let mut edges = vec![lo];
        edges.extend(g.breakpoints().iter().map(|t| t.tanh()).filter(|&s| lo < s && s < hi));
        edges.push(hi);
        let s_rule = QuadratureRule::on_pieces(&edges, nodes)?;
        let couplings: Vec<(f64, f64)> = s_rule
            .iter()
            .map(|(s, w)| (s, w * g.density(s.atanh()) / (1.0 - s * s)))
            .collect();
        average_over_couplings(pair, phi, &couplings)?
    } else {
        PointMeasure::zero()
    };

    let hull = [lhs.support_hull(), rhs.support_hull()];
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in hull.iter().flatten() {
        min = min.min(i.lo());
        max = max.max(i.hi());
    }
    let (tv_distance, bins) = if min.is_finite() {
        let origin = min - bin_width;
        let bins = ((max + bin_width - origin) / bin_width).ceil() as usize;
        let l = lhs.bin_linear(bin_width, origin, bins)?;
        let r = rhs.bin_linear(bin_width, origin, bins)?;
        (l.tv_distance(&r)?, bins)
    } else {
        (0.0, 0)
    };
    Ok(ChangeOfVariablesReport {
        tv_distance,
        tanh_side_mass: lhs.total_mass(),
        substituted_side_mass: rhs.total_mass(),
        discarded_mass,
        bin_width,
        bins,
        nodes,
    })
}

/// Continuity of the averaged `ν` next to that of a single `ρ_{H(t₀)}^Φ`.
#[derive(Debug, Clone, Serialize)]
pub struct SmoothingContrast {
    pub averaged: ContinuityReport,
    pub single: ContinuityReport,
    /// Midpoint of the support of `h`.
    pub t0: f64,
    pub single_max_atom: f64,
    /// `s(ρ, ε) ≥ max atom` at every rung.
    pub atom_bound_holds: bool,
    /// `max / min` of the averaged window densities.
    pub density_ratio: f64,
    /// `s(h dt, ε)` per rung.
    pub reference_s: Vec<f64>,
    /// Empirical `max_ε s(ν, ε) / s(h dt, ε)`.
    pub c_hat: f64,
    pub range_defect: f64,
}

pub fn smoothing_contrast(
    pair: &OperatorPair,
    phi: &Vector,
    h: &WeightProfile,
    rule: &QuadratureRule,
    epsilons: &[f64],
) -> Result<SmoothingContrast> {
    let averaged = average_spectral_measure(pair, phi, h, rule)?;
    let (lo, hi) = h.support();
    let t0 = 0.5 * (lo + hi);
    let single_measure = pair.at(t0).eigh()?.spectral_measure(phi)?;
    contrast_from(&averaged, &single_measure, t0, h, epsilons)
}

fn contrast_from(
    averaged: &AveragedMeasure,
    single_measure: &PointMeasure,
    t0: f64,
    h: &WeightProfile,
    epsilons: &[f64],
) -> Result<SmoothingContrast> {
    let avg = continuity_ladder(&averaged.measure, epsilons)?;
    let single = continuity_ladder(single_measure, epsilons)?;
    let single_max_atom = single_measure.max_weight();
    let atom_bound_holds = single.s_values.iter().all(|&s| s >= single_max_atom * (1.0 - 1e-12));
    let reference_s: Vec<f64> = epsilons.iter().map(|&e| h.window_sup(e)).collect();
    let c_hat = avg
        .s_values
        .iter()
        .zip(&reference_s)
        .map(|(s, r)| s / r)
        .fold(0.0, f64::max);
    Ok(SmoothingContrast {
        density_ratio: avg.density_ratio(),
        averaged: avg,
        single,
        t0,
        single_max_atom,
        atom_bound_holds,
        reference_s,
        c_hat,
        range_defect: averaged.range_defect,
    })
}

/// Ladder used by the smoothing contrast.
pub const CONTRAST_LADDER: [f64; 4] = [0.05, 0.02, 0.01, 0.005];

/// The standard contrast instance: `n = 40`, `B ≥ 0` of rank 3, `Φ` a unit
/// vector in `Range(B)`, `h` uniform on `[0, 1]`.
pub fn desk_instance(seed: u64) -> Result<(OperatorPair, Vector, WeightProfile)> {
    let pair = random_pair(40, 3, seed)?;
    let phi = range_vector(&pair, seed.wrapping_add(1));
    Ok((pair, phi, WeightProfile::uniform(0.0, 1.0)?))
}

/// A pair with an `A`-eigenvector `v` such that `Bv = 0`, and `Φ = v`.
/// `H(t)v = λv` for every `t`, so `ν = (∫h) δ_λ` keeps its atom.
pub fn negative_control(n: usize, rank: usize, seed: u64) -> Result<(OperatorPair, Vector, f64)> {
    if rank >= n {
        return Err(Error::InvalidArgument(format!("rank {rank} leaves no kernel in dimension {n}")));
    }
    let v = random_unit_vector(n, seed);
    let eye = DMatrix::<C64>::identity(n, n);
    let p = &eye - &v * v.adjoint();
    let lambda = 0.25;
    let a0 = random_hermitian(n, 1.0, seed.wrapping_add(1));
    let a = HermitianOperator::new(&p * a0.matrix() * &p + &v * v.adjoint() * C64::new(lambda, 0.0))?;
    let b0 = random_psd(n, rank, seed.wrapping_add(2));
    let b = HermitianOperator::new(&p * b0.matrix() * &p)?;
    Ok((OperatorPair::new(a, b)?, v, lambda))
}
