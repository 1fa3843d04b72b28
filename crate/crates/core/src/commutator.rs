//! Direct integrals of fiber families, the periodic grid carrying
//! `T = tanh Q` and `D = arctan P`, the commutator `C = i[T, D]`, and the
//! Kronecker identity `i[A⊗1 + B⊗T, 1⊗D] = B⊗C`.

use std::io::Write;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::{format_f64, Interval};
use crate::spectral::{HermitianOperator, OperatorPair, Vector};
use crate::C64;

/// Default cap on `n·N` for Kronecker assembly.
pub const KRONECKER_CAP: usize = 4096;
pub const DECOMPOSITION_TOLERANCE: f64 = 1e-12;
pub const KRONECKER_TOLERANCE: f64 = 1e-10;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

/// Single-line JSON record emitted by every identity check.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub discrepancy: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, discrepancy: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            discrepancy,
            tolerance,
            pass: discrepancy <= tolerance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain record serializes")
    }
}

/// Fibers `H(t_j)` with weights `g_j`.
#[derive(Debug, Clone)]
pub struct FiberFamily {
    fibers: Vec<HermitianOperator>,
    ts: Vec<f64>,
    weights: Vec<f64>,
}

impl FiberFamily {
    pub fn new(fibers: Vec<HermitianOperator>, ts: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let Some(first) = fibers.first() else {
            return Err(Error::InvalidArgument("a fiber family needs at least one fiber".into()));
        };
        let n = first.dim();
        for f in &fibers {
            f.check_dim(n)?;
        }
        if ts.len() != fibers.len() || weights.len() != fibers.len() {
            return Err(Error::DimensionMismatch {
                expected: fibers.len(),
                got: if ts.len() != fibers.len() { ts.len() } else { weights.len() },
            });
        }
        if weights.iter().chain(&ts).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("fiber weights and parameters must be finite".into()));
        }
        Ok(Self { fibers, ts, weights })
    }

    /// Fibers `A + t_j B` of a pair.
    pub fn from_pair(pair: &OperatorPair, ts: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let fibers = ts.iter().map(|&t| pair.at(t)).collect();
        Self::new(fibers, ts, weights)
    }

    pub fn fiber_dim(&self) -> usize {
        self.fibers[0].dim()
    }

    pub fn len(&self) -> usize {
        self.fibers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibers.is_empty()
    }

    pub fn fibers(&self) -> &[HermitianOperator] {
        &self.fibers
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(g_j f)_j`, the finite-fiber analogue of `f ⊗ g`.
    pub fn lift(&self, f: &Vector) -> Result<Vector> {
        self.fibers[0].check_dim(f.len())?;
        let n = self.fiber_dim();
        Ok(Vector::from_fn(n * self.len(), |i, _| f[i % n] * self.weights[i / n]))
    }
}

/// `⊕_j H(t_j)`.
pub fn block_direct_integral(family: &FiberFamily) -> HermitianOperator {
    let n = family.fiber_dim();
    let mut m = DMatrix::<C64>::zeros(n * family.len(), n * family.len());
    for (j, fiber) in family.fibers.iter().enumerate() {
        m.view_mut((j * n, j * n), (n, n)).copy_from(fiber.matrix());
    }
    HermitianOperator::new(m).expect("block diagonal of Hermitian fibers is Hermitian")
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionCheck {
    /// `⟨E_H(I) f⊗g, f⊗g⟩` from the block operator.
    pub block_side: f64,
    /// `Σ_j |g_j|² ⟨E_{H(t_j)}(I) f, f⟩`.
    pub fiber_side: f64,
    pub record: CheckRecord,
}

/// Compares the spectral projection of the assembled block operator with the
/// fiberwise sum; the tolerance is `1e-12·‖f‖²·Σ|g_j|²`.
pub fn decomposition_identity_check(family: &FiberFamily, f: &Vector, interval: Interval) -> Result<DecompositionCheck> {
    let lifted = family.lift(f)?;
    let block = block_direct_integral(family);
    let projected = block.eigh()?.project(interval, &lifted)?;
    let block_side = lifted.dotc(&projected).re;
    let mut fiber_side = 0.0;
    for (fiber, g) in family.fibers.iter().zip(&family.weights) {
        fiber_side += g * g * fiber.eigh()?.spectral_measure(f)?.restrict(interval);
    }
    let scale = f.norm_squared() * family.weights.iter().map(|g| g * g).sum::<f64>();
    Ok(DecompositionCheck {
        block_side,
        fiber_side,
        record: CheckRecord::new(
            "direct-integral",
            (block_side - fiber_side).abs(),
            DECOMPOSITION_TOLERANCE * scale.max(f64::MIN_POSITIVE),
        ),
    })
}

/// `N` points `x_j = −L + jΔ` on the periodic box `[−L, L)` with momenta
/// `p_k = 2πk/(2L)`, `k = −N/2 … N/2 − 1`.
#[derive(Debug, Clone)]
pub struct GridDiscretization {
    n: usize,
    half_length: f64,
    positions: Vec<f64>,
    momenta: Vec<f64>,
    q: HermitianOperator,
    p: HermitianOperator,
    t: HermitianOperator,
    d: HermitianOperator,
}

pub fn build_grid(n: usize, half_length: f64) -> Result<GridDiscretization> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("N must be a power of two ≥ 16, got {n}")));
    }
    if !(half_length > 0.0) || !half_length.is_finite() {
        return Err(Error::InvalidGrid(format!("L must be positive, got {half_length}")));
    }
    let dx = 2.0 * half_length / n as f64;
    let positions: Vec<f64> = (0..n).map(|j| -half_length + dx * j as f64).collect();
    let half = n as i64 / 2;
    let momenta: Vec<f64> = (-half..half)
        .map(|k| std::f64::consts::PI * k as f64 / half_length)
        .collect();
    let fourier = DMatrix::from_fn(n, n, |j, k| {
        C64::from_polar(1.0 / (n as f64).sqrt(), momenta[k] * positions[j])
    });
    let in_fourier = |f: &dyn Fn(f64) -> f64| -> Result<HermitianOperator> {
        let diag = DMatrix::from_diagonal(&Vector::from_iterator(n, momenta.iter().map(|&p| C64::new(f(p), 0.0))));
        HermitianOperator::new(&fourier * diag * fourier.adjoint())
    };
    Ok(GridDiscretization {
        n,
        half_length,
        q: HermitianOperator::diagonal(&positions),
        t: HermitianOperator::diagonal(&positions.iter().map(|x| x.tanh()).collect::<Vec<_>>()),
        p: in_fourier(&|p| p)?,
        d: in_fourier(&f64::atan)?,
        positions,
        momenta,
    })
}

impl GridDiscretization {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.n as f64
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn q(&self) -> &HermitianOperator {
        &self.q
    }

    pub fn p(&self) -> &HermitianOperator {
        &self.p
    }

    pub fn t(&self) -> &HermitianOperator {
        &self.t
    }

    pub fn d(&self) -> &HermitianOperator {
        &self.d
    }

    /// Largest `|Im D_{jl}|` in the position basis. The unpaired Nyquist
    /// momentum `−N/2` keeps this away from zero.
    pub fn d_imaginary_part(&self) -> f64 {
        self.d.matrix().iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// `i(XY − YX)`.
pub fn commutator_of(x: &HermitianOperator, y: &HermitianOperator) -> Result<HermitianOperator> {
    x.check_dim(y.dim())?;
    let (x, y) = (x.matrix(), y.matrix());
    HermitianOperator::new((x * y - y * x) * C64::new(0.0, 1.0))
}

/// `C = i(TD − DT)` with its ascending spectrum.
#[derive(Debug, Clone)]
pub struct Commutator {
    pub operator: HermitianOperator,
    pub eigenvalues: Vec<f64>,
}

impl Commutator {
    pub fn norm(&self) -> f64 {
        spectral_norm(&self.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Fraction of eigenvalues that are `> 0`.
    pub fn positive_fraction(&self) -> f64 {
        let count = self.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        count as f64 / self.eigenvalues.len().max(1) as f64
    }

    /// Smallest eigenvalue above `1e-8·‖C‖`, if any.
    pub fn positive_infimum(&self) -> Option<f64> {
        let cut = POSITIVITY_TOLERANCE * self.norm();
        self.eigenvalues.iter().copied().find(|&l| l > cut)
    }
}

fn spectral_norm(ascending: &[f64]) -> f64 {
    match (ascending.first(), ascending.last()) {
        (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
        _ => 0.0,
    }
}

pub fn commutator(grid: &GridDiscretization) -> Result<Commutator> {
    let operator = commutator_of(&grid.t, &grid.d)?;
    let eigenvalues = operator.eigenvalues()?;
    Ok(Commutator { operator, eigenvalues })
}

/// Sign and refinement summary of the discrete `C`.
#[derive(Debug, Clone, Serialize)]
pub struct HowlandReport {
    pub n: usize,
    pub half_length: f64,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub norm: f64,
    pub positive_fraction: f64,
    pub positive_infimum: Option<f64>,
    pub trace: f64,
    /// `min eig ≥ −1e-8·‖C‖`.
    pub semidefinite: bool,
}

pub fn howland_report(grid: &GridDiscretization) -> Result<HowlandReport> {
    let c = commutator(grid)?;
    let norm = c.norm();
    Ok(HowlandReport {
        n: grid.n,
        half_length: grid.half_length,
        min_eigenvalue: c.min_eigenvalue(),
        max_eigenvalue: c.eigenvalues.last().copied().unwrap_or(0.0),
        norm,
        positive_fraction: c.positive_fraction(),
        positive_infimum: c.positive_infimum(),
        trace: c.operator.trace().re,
        semidefinite: c.min_eigenvalue() >= -POSITIVITY_TOLERANCE * norm,
    })
}

/// Positive-part infima along a sequence of grids and the relative change
/// between successive ones.
#[derive(Debug, Clone, Serialize)]
pub struct RefinementReport {
    pub grids: Vec<(usize, f64)>,
    pub infima: Vec<Option<f64>>,
    pub relative_changes: Vec<Option<f64>>,
}

impl RefinementReport {
    /// Every successive change exists and is at most `tolerance`.
    pub fn stable_within(&self, tolerance: f64) -> bool {
        self.relative_changes.iter().all(|c| matches!(c, Some(c) if *c <= tolerance))
    }
}

pub fn refinement_report(grids: &[(usize, f64)]) -> Result<RefinementReport> {
    let infima = grids
        .iter()
        .map(|&(n, l)| Ok(commutator(&build_grid(n, l)?)?.positive_infimum()))
        .collect::<Result<Vec<_>>>()?;
    let relative_changes = infima
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some((b - a).abs() / a.abs()),
            _ => None,
        })
        .collect();
    Ok(RefinementReport {
        grids: grids.to_vec(),
        infima,
        relative_changes,
    })
}

/// `X ⊗ Y` with `X` on the outer (slow) index.
pub fn kron(x: &DMatrix<C64>, y: &DMatrix<C64>) -> DMatrix<C64> {
    x.kronecker(y)
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::SizeCap { size, cap });
    }
    Ok(())
}

/// `‖i[Ĥ, D̂] − B⊗C‖_F` with `Ĥ = A⊗1 + B⊗T` and `D̂ = 1⊗D`, each side
/// assembled independently; tolerance `1e-10·‖B‖·‖C‖`.
pub fn kato_putnam_identity(pair: &OperatorPair, grid: &GridDiscretization, cap: usize) -> Result<CheckRecord> {
    let (n, big_n) = (pair.dim(), grid.n);
    check_cap(n * big_n, cap)?;
    let one_n = DMatrix::<C64>::identity(n, n);
    let one_grid = DMatrix::<C64>::identity(big_n, big_n);
    let h_hat = kron(pair.a().matrix(), &one_grid) + kron(pair.b().matrix(), grid.t.matrix());
    let d_hat = kron(&one_n, grid.d.matrix());
    let lhs = (&h_hat * &d_hat - &d_hat * &h_hat) * C64::new(0.0, 1.0);
    let c = commutator(grid)?;
    let rhs = kron(pair.b().matrix(), c.operator.matrix());
    let b_norm = pair.b().spectral_radius()?;
    Ok(CheckRecord::new(
        "kato-putnam",
        (lhs - rhs).norm(),
        KRONECKER_TOLERANCE * b_norm * c.norm(),
    ))
}

/// Spectrum of `B⊗C` as all products `β_i γ_k`.
#[derive(Debug, Clone, Serialize)]
pub struct PositivityReport {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `‖B‖·‖C‖`.
    pub scale: f64,
    pub semidefinite: bool,
    /// Eigenvalues of `B⊗C` within `1e-8·scale` of zero.
    pub kernel_dim: usize,
    /// `dim ker B · N + rank B · dim ker C`.
    pub expected_kernel_dim: usize,
    pub kernel_b: usize,
    pub kernel_c: usize,
}

pub fn positivity_report(pair: &OperatorPair, grid: &GridDiscretization) -> Result<PositivityReport> {
    let beta = pair.b().eigenvalues()?;
    let gamma = commutator(grid)?.eigenvalues;
    let (b_norm, c_norm) = (spectral_norm(&beta), spectral_norm(&gamma));
    let scale = b_norm * c_norm;
    let mut products: Vec<f64> = beta.iter().flat_map(|b| gamma.iter().map(move |c| b * c)).collect();
    products.sort_by(f64::total_cmp);
    let cut = POSITIVITY_TOLERANCE * scale;
    let kernel_b = beta.iter().filter(|b| b.abs() <= POSITIVITY_TOLERANCE * b_norm).count();
    let kernel_c = gamma.iter().filter(|c| c.abs() <= POSITIVITY_TOLERANCE * c_norm).count();
    let min_eigenvalue = products.first().copied().unwrap_or(0.0);
    Ok(PositivityReport {
        min_eigenvalue,
        max_eigenvalue: products.last().copied().unwrap_or(0.0),
        scale,
        semidefinite: min_eigenvalue >= -cut,
        kernel_dim: products.iter().filter(|p| p.abs() <= cut).count(),
        expected_kernel_dim: kernel_b * grid.n + (beta.len() - kernel_b) * kernel_c,
        kernel_b,
        kernel_c,
    })
}

/// CSV `index,eigenvalue`.
pub fn write_spectrum<W: Write>(eigenvalues: &[f64], mut out: W) -> Result<()> {
    writeln!(out, "index,eigenvalue")?;
    for (i, l) in eigenvalues.iter().enumerate() {
        writeln!(out, "{i},{}", format_f64(*l))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{random_hermitian, random_pair, random_psd, random_vector};
    use crate::spectral::real_vector;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_fibers() -> FiberFamily {
        let g = std::f64::consts::FRAC_1_SQRT_2;
        FiberFamily::new(
            vec![HermitianOperator::diagonal(&[0.0]), HermitianOperator::diagonal(&[1.0])],
            vec![0.0, 1.0],
            vec![g, g],
        )
        .unwrap()
    }

    #[test]
    fn block_assembly_examples() {
        let one = FiberFamily::new(vec![random_hermitian(3, 1.0, 1)], vec![0.0], vec![1.0]).unwrap();
        assert_eq!(block_direct_integral(&one).matrix(), one.fibers()[0].matrix());
        let block = block_direct_integral(&two_fibers());
        assert_eq!(block.matrix(), HermitianOperator::diagonal(&[0.0, 1.0]).matrix());
        assert!(FiberFamily::new(
            vec![HermitianOperator::zeros(2), HermitianOperator::zeros(3)],
            vec![0.0, 1.0],
            vec![1.0, 1.0]
        )
        .is_err());
    }

    #[test]
    fn block_spectrum_is_union_of_fiber_spectra() {
        let pair = random_pair(4, 2, 3).unwrap();
        let family = FiberFamily::from_pair(&pair, vec![-1.0, 0.0, 0.5], vec![1.0; 3]).unwrap();
        let mut union: Vec<f64> = family.fibers().iter().flat_map(|f| f.eigenvalues().unwrap()).collect();
        union.sort_by(f64::total_cmp);
        let block = block_direct_integral(&family).eigenvalues().unwrap();
        for (x, y) in union.iter().zip(&block) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_examples() {
        let fam = two_fibers();
        let f = real_vector(&[1.0]);
        let c = decomposition_identity_check(&fam, &f, Interval::new(-0.5, 0.5).unwrap()).unwrap();
        assert!((c.block_side - 0.5).abs() < 1e-15 && (c.fiber_side - 0.5).abs() < 1e-15);
        let all = decomposition_identity_check(&fam, &f, Interval::everything()).unwrap();
        assert!((all.block_side - 1.0).abs() < 1e-14 && all.record.pass);
    }

    #[test]
    fn random_family_identity() {
        let pair = random_pair(6, 2, 11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let ts: Vec<f64> = (0..10).map(|_| rng.random_range(-2.0..2.0)).collect();
        let gs: Vec<f64> = (0..10).map(|_| rng.random_range(0.0..1.0)).collect();
        let family = FiberFamily::from_pair(&pair, ts, gs).unwrap();
        let f = random_vector(6, 13);
        for _ in 0..5 {
            let a: f64 = rng.random_range(-3.0..3.0);
            let b = a + rng.random_range(0.0..3.0);
            let c = decomposition_identity_check(&family, &f, Interval::new(a, b).unwrap()).unwrap();
            assert!(c.record.pass, "{c:?}");
        }
    }

    #[test]
    fn grid_operators() {
        let g = build_grid(32, 5.0).unwrap();
        assert!((g.spacing() - 10.0 / 32.0).abs() < 1e-15);
        let t = g.t().eigenvalues().unwrap();
        let mut expect: Vec<f64> = g.positions().iter().map(|x| x.tanh()).collect();
        expect.sort_by(f64::total_cmp);
        assert_eq!(t, expect);
        let d = g.d().eigenvalues().unwrap();
        let mut expect: Vec<f64> = g.momenta().iter().map(|p| p.atan()).collect();
        expect.sort_by(f64::total_cmp);
        for (x, y) in d.iter().zip(&expect) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(d.iter().all(|l| l.abs() < std::f64::consts::FRAC_PI_2));
        assert!(t.iter().all(|l| l.abs() < 1.0));
        let p = g.p().eigenvalues().unwrap();
        assert!((p[0] + std::f64::consts::PI * 16.0 / 5.0).abs() < 1e-11);
        assert!(build_grid(48, 5.0).is_err());
        assert!(build_grid(8, 5.0).is_err());
        assert!(build_grid(16, 0.0).is_err());
    }

    #[test]
    fn commutator_is_traceless_and_vanishes_for_commuting_pairs() {
        let g = build_grid(32, 6.0).unwrap();
        let c = commutator(&g).unwrap();
        assert!(c.operator.trace().norm() < 1e-12);
        let z = commutator_of(g.t(), &HermitianOperator::identity(32)).unwrap();
        assert_eq!(z.frobenius_norm(), 0.0);
        let x = random_hermitian(7, 1.0, 2);
        let y = random_hermitian(7, 1.0, 3);
        assert!(commutator_of(&x, &y).unwrap().trace().norm() < 1e-12);
    }

    #[test]
    fn kronecker_identity() {
        let g = build_grid(16, 4.0).unwrap();
        let pair = random_pair(4, 2, 21).unwrap();
        let r = kato_putnam_identity(&pair, &g, KRONECKER_CAP).unwrap();
        assert!(r.pass, "{r:?}");
        let zero = OperatorPair::new(random_hermitian(2, 1.0, 1), HermitianOperator::zeros(2)).unwrap();
        let r = kato_putnam_identity(&zero, &g, KRONECKER_CAP).unwrap();
        assert_eq!(r.discrepancy, 0.0);
        assert!(kato_putnam_identity(&pair, &g, 32).is_err());
    }

    #[test]
    fn scalar_fiber_reduces_to_commutator() {
        let g = build_grid(16, 4.0).unwrap();
        let pair = OperatorPair::new(HermitianOperator::diagonal(&[0.7]), HermitianOperator::identity(1)).unwrap();
        let r = kato_putnam_identity(&pair, &g, KRONECKER_CAP).unwrap();
        assert!(r.pass && r.discrepancy < 1e-12);
    }

    #[test]
    fn positivity_with_identity_and_rank_one() {
        let g = build_grid(16, 4.0).unwrap();
        let c = commutator(&g).unwrap().eigenvalues;
        let id = OperatorPair::new(HermitianOperator::zeros(2), HermitianOperator::identity(2)).unwrap();
        let r = positivity_report(&id, &g).unwrap();
        assert_eq!(r.min_eigenvalue, c[0]);
        assert_eq!(r.max_eigenvalue, c[15]);
        let v = random_vector(3, 4);
        let rank_one = OperatorPair::new(random_hermitian(3, 1.0, 5), HermitianOperator::outer(&v)).unwrap();
        let r = positivity_report(&rank_one, &g).unwrap();
        assert!(r.kernel_dim >= 2 * 16);
        assert_eq!(r.kernel_b, 2);
        assert_eq!(r.kernel_dim, r.expected_kernel_dim);
    }

    #[test]
    fn spectrum_csv() {
        let mut out = Vec::new();
        write_spectrum(&[-1.0, 0.5], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with("index,eigenvalue\n0,-1.0000000000000000e0\n"));
        let rec = CheckRecord::new("x", 0.5, 1.0);
        assert_eq!(rec.to_json(), r#"{"check":"x","discrepancy":0.5,"tolerance":1.0,"pass":true}"#);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn kronecker_spectrum_is_pairwise_products(seed in 0u64..1000, rank in 1usize..4) {
            let b = random_psd(3, rank, seed);
            let c = random_hermitian(4, 1.0, seed + 1);
            let direct = HermitianOperator::new(kron(b.matrix(), c.matrix())).unwrap().eigenvalues().unwrap();
            let (bb, cc) = (b.eigenvalues().unwrap(), c.eigenvalues().unwrap());
            let mut products: Vec<f64> = bb.iter().flat_map(|x| cc.iter().map(move |y| x * y)).collect();
            products.sort_by(f64::total_cmp);
            for (x, y) in direct.iter().zip(&products) {
                prop_assert!((x - y).abs() < 1e-10);
            }
            // PSD ⊗ PSD
            let c2 = random_psd(4, 2, seed + 2);
            let pd = HermitianOperator::new(kron(b.matrix(), c2.matrix())).unwrap().eigenvalues().unwrap();
            prop_assert!(pd[0] >= -1e-10);
        }
    }
}
