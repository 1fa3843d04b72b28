//! Dense Hermitian spectral calculus: eigendecompositions, spectral measures
//! `ρ_H^Φ`, spectral projections `E_H(I)`, and the cyclicity test for a pair
//! `(A, B)`.

use std::io::{BufRead, Write};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measure::{format_f64, Interval, PointMeasure};
use crate::C64;

pub type Vector = DVector<C64>;

/// Relative asymmetry accepted (and then symmetrized away) on construction.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
/// Relative tolerance for the negative part of `B`.
pub const PSD_TOLERANCE: f64 = 1e-10;
/// Relative singular-value cutoff for numerical ranks.
pub const RANK_TOLERANCE: f64 = 1e-10;

const EIGEN_EPS: f64 = f64::EPSILON;
const EIGEN_MAX_ITERATIONS: usize = 100_000;

pub fn real_vector(values: &[f64]) -> Vector {
    Vector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn norm_sqr(v: &Vector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Dense Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<C64>,
}

impl HermitianOperator {
    /// Accepts `matrix` if it is Hermitian to within
    /// `HERMITIAN_TOLERANCE · max|entry|` and stores its Hermitian part.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let adjoint = matrix.adjoint();
        let asymmetry = matrix
            .iter()
            .zip(adjoint.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let tolerance = HERMITIAN_TOLERANCE * scale;
        if asymmetry > tolerance {
            return Err(Error::NotHermitian { asymmetry, tolerance });
        }
        Ok(Self {
            matrix: (matrix + adjoint) * C64::new(0.5, 0.0),
        })
    }

    pub fn from_real(n: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: row_major.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| C64::new(row_major[i * n + j], 0.0)))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            matrix: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    /// `v vᴴ`.
    pub fn outer(v: &Vector) -> Self {
        Self {
            matrix: v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `self + t·other`.
    pub fn add_scaled(&self, other: &Self, t: f64) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix * C64::new(t, 0.0),
        })
    }

    pub fn shift(&self, c: f64) -> Self {
        let n = self.dim();
        Self {
            matrix: &self.matrix + DMatrix::<C64>::identity(n, n) * C64::new(c, 0.0),
        }
    }

    /// `U H Uᴴ` for a unitary `U` (not checked).
    pub fn conjugate_by(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        self.check_dim(unitary.nrows())?;
        Self::new(unitary * &self.matrix * unitary.adjoint())
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v.len())?;
        Ok(&self.matrix * v)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            })
        }
    }

    /// Short content hash used to identify matrices in error reports.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for z in self.matrix.iter() {
            hasher.update(z.re.to_le_bytes());
            hasher.update(z.im.to_le_bytes());
        }
        hasher.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        eigh(self)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh(self)?.eigenvalues)
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> Result<f64> {
        let values = self.eigenvalues()?;
        Ok(values.iter().map(|x| x.abs()).fold(0.0, f64::max))
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// Dense Hermitian eigensolve (Householder tridiagonalization followed by
/// implicit QR), sorted ascending. Deterministic for identical input.
pub fn eigh(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let eig = SymmetricEigen::try_new(h.matrix.clone(), EIGEN_EPS, EIGEN_MAX_ITERATIONS).ok_or_else(|| {
        Error::NoConvergence {
            hash: h.content_hash(),
        }
    })?;
    let n = h.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `max_i ‖Hψ_i − λ_iψ_i‖`.
    pub fn residual(&self, h: &HermitianOperator) -> f64 {
        let hv = h.matrix() * &self.eigenvectors;
        (0..self.dim())
            .map(|i| {
                let col = hv.column(i) - self.eigenvectors.column(i) * C64::new(self.eigenvalues[i], 0.0);
                col.norm()
            })
            .fold(0.0, f64::max)
    }

    /// `max |ΨᴴΨ − I|` entrywise.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        let id = DMatrix::<C64>::identity(n, n);
        (gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Components `⟨ψ_i, Φ⟩`.
    pub fn coefficients(&self, phi: &Vector) -> Result<Vector> {
        if phi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: phi.len(),
            });
        }
        Ok(self.eigenvectors.adjoint() * phi)
    }

    /// Atoms `(λ_i, |⟨ψ_i, Φ⟩|²)` before canonicalization.
    pub fn spectral_atoms(&self, phi: &Vector) -> Result<Vec<(f64, f64)>> {
        let coeffs = self.coefficients(phi)?;
        Ok(self
            .eigenvalues
            .iter()
            .zip(coeffs.iter())
            .map(|(&l, c)| (l, c.norm_sqr()))
            .collect())
    }

    pub fn spectral_measure(&self, phi: &Vector) -> Result<PointMeasure> {
        Ok(PointMeasure::canonicalize(self.spectral_atoms(phi)?))
    }

    pub fn project(&self, interval: Interval, phi: &Vector) -> Result<Vector> {
        let coeffs = self.coefficients(phi)?;
        let mut out = Vector::zeros(self.dim());
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            if interval.contains(l) {
                out += self.eigenvectors.column(i) * coeffs[i];
            }
        }
        Ok(out)
    }
}

/// `ρ_H^Φ`: atoms at the eigenvalues of `H` with weights `|⟨ψ_i, Φ⟩|²`,
/// numerically coincident eigenvalues merged.
pub fn spectral_measure(h: &HermitianOperator, phi: &Vector) -> Result<PointMeasure> {
    h.check_dim(phi.len())?;
    h.eigh()?.spectral_measure(phi)
}

/// `E_H(I) Φ`.
pub fn spectral_projection_apply(h: &HermitianOperator, interval: Interval, phi: &Vector) -> Result<Vector> {
    h.check_dim(phi.len())?;
    h.eigh()?.project(interval, phi)
}

/// Hermitian `A` with positive semidefinite `B` of the same dimension; the
/// family `H(t) = A + tB`.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    a: HermitianOperator,
    b: HermitianOperator,
    b_eig: EigenDecomposition,
}

impl OperatorPair {
    pub fn new(a: HermitianOperator, b: HermitianOperator) -> Result<Self> {
        a.check_dim(b.dim())?;
        let b_eig = b.eigh()?;
        let radius = b_eig.norm();
        let min_eig = b_eig.eigenvalues.first().copied().unwrap_or(0.0);
        if min_eig < -PSD_TOLERANCE * radius {
            return Err(Error::NotPositiveSemidefinite { min_eig });
        }
        Ok(Self { a, b, b_eig })
    }

    pub fn a(&self) -> &HermitianOperator {
        &self.a
    }

    pub fn b(&self) -> &HermitianOperator {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `A + tB`.
    pub fn at(&self, t: f64) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.a.matrix + &self.b.matrix * C64::new(t, 0.0),
        }
    }

    /// Orthonormal basis of `Range(B)` (eigenvectors above the rank cutoff).
    pub fn range_basis(&self) -> DMatrix<C64> {
        let cutoff = RANK_TOLERANCE * self.b_eig.norm();
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&i| self.b_eig.eigenvalues[i].abs() > cutoff)
            .collect();
        DMatrix::from_fn(self.dim(), cols.len(), |r, c| self.b_eig.eigenvectors[(r, cols[c])])
    }

    /// `‖Φ − P_{Range B} Φ‖ / ‖Φ‖` (zero for `Φ = 0`).
    pub fn range_defect(&self, phi: &Vector) -> Result<f64> {
        self.a.check_dim(phi.len())?;
        let norm = phi.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let basis = self.range_basis();
        let projected = &basis * (basis.adjoint() * phi);
        Ok((phi - projected).norm() / norm)
    }

    /// Membership of `Φ` in `Range(B)` at relative tolerance 1e-10.
    pub fn in_range(&self, phi: &Vector) -> Result<bool> {
        Ok(self.range_defect(phi)? <= RANK_TOLERANCE)
    }
}

/// Dimension of the span of `{A^k B e_j}`, i.e. of the smallest
/// `A`-invariant subspace containing `Range(B)`; equals `n` exactly when
/// `{φ(A) B f}` is dense.
///
/// Computed spectrally: that subspace is `⊕_c P_c Range(B)` over the
/// eigenspaces `P_c` of `A`, so its dimension is `Σ_c rank(V_cᴴ B)`. This
/// avoids forming high powers of `A`, which overflow the rank tolerance long
/// before `k = n − 1`.
pub fn cyclicity_rank(pair: &OperatorPair) -> Result<usize> {
    let a_eig = pair.a.eigh()?;
    let b_norm = pair.b_eig.norm();
    if b_norm == 0.0 {
        return Ok(0);
    }
    let n = pair.dim();
    let scale = a_eig
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(a_eig.eigenvalues[n - 1] - a_eig.eigenvalues[0]);
    let cluster_tol = RANK_TOLERANCE * scale.max(f64::MIN_POSITIVE);

    let mut rank = 0;
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && a_eig.eigenvalues[end] - a_eig.eigenvalues[start] <= cluster_tol {
            end += 1;
        }
        let block = a_eig.eigenvectors.columns(start, end - start).adjoint() * pair.b.matrix();
        let singular = block.singular_values();
        rank += singular.iter().filter(|&&s| s > RANK_TOLERANCE * b_norm).count();
        start = end;
    }
    Ok(rank)
}

/// Reads the plain-text matrix format: a line with `n`, then `n` rows of `n`
/// whitespace-separated `re,im` entries. Blank lines and `#` comments are
/// skipped.
pub fn read_matrix<R: BufRead>(reader: R) -> Result<HermitianOperator> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(Error::from))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
    let header = lines.next().ok_or_else(|| Error::Parse("missing dimension header".into()))??;
    let n: usize = header
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension header {header:?}")))?;
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing row {row}")))??;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(Error::Parse(format!("row {row} has {} entries, expected {n}", entries.len())));
        }
        for entry in entries {
            let (re, im) = entry
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("entry {entry:?} is not re,im")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number {s:?}")))
            };
            data.push(C64::new(parse(re)?, parse(im)?));
        }
    }
    HermitianOperator::new(DMatrix::from_row_slice(n, n, &data))
}

pub fn write_matrix<W: Write>(h: &HermitianOperator, mut out: W) -> Result<()> {
    let n = h.dim();
    writeln!(out, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let z = h.matrix[(i, j)];
                format!("{},{}", format_f64(z.re), format_f64(z.im))
            })
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    Ok(())
}
