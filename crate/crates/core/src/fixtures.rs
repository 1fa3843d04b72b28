//! Seeded generators for reproducible test and experiment instances.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::spectral::{HermitianOperator, OperatorPair, Vector};
use crate::C64;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// GUE-type matrix whose spectrum fills roughly `[-2·scale, 2·scale]`.
pub fn random_hermitian(n: usize, scale: f64, seed: u64) -> HermitianOperator {
    let mut rng = rng(seed);
    let g = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
    let h = (&g + g.adjoint()) * C64::new(scale / (2.0 * n.max(1) as f64).sqrt(), 0.0);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

/// Real symmetric variant of [`random_hermitian`].
pub fn random_symmetric(n: usize, scale: f64, seed: u64) -> HermitianOperator {
    let mut rng = rng(seed);
    let g = DMatrix::from_fn(n, n, |_, _| C64::new(rng.sample(StandardNormal), 0.0));
    let h = (&g + g.transpose()) * C64::new(scale / (2.0 * n.max(1) as f64).sqrt(), 0.0);
    HermitianOperator::new(h).expect("symmetrized matrix is Hermitian")
}

pub fn random_vector(n: usize, seed: u64) -> Vector {
    let mut rng = rng(seed);
    Vector::from_fn(n, |_, _| complex_normal(&mut rng))
}

pub fn random_unit_vector(n: usize, seed: u64) -> Vector {
    let v = random_vector(n, seed);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

/// Haar-ish unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(n: usize, seed: u64) -> DMatrix<C64> {
    let mut rng = rng(seed);
    let g = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
    g.qr().q()
}

/// Positive semidefinite matrix of the given rank: `Σ_k c_k v_k v_kᴴ` with
/// unit `v_k` and `c_k ∈ [0.5, 1.5)`.
pub fn random_psd(n: usize, rank: usize, seed: u64) -> HermitianOperator {
    let mut rng = rng(seed);
    let mut m = DMatrix::<C64>::zeros(n, n);
    for _ in 0..rank {
        let v = Vector::from_fn(n, |_, _| complex_normal(&mut rng));
        let v = &v / C64::new(v.norm(), 0.0);
        let c: f64 = rng.random_range(0.5..1.5);
        m += &v * v.adjoint() * C64::new(c, 0.0);
    }
    HermitianOperator::new(m).expect("sum of outer products is Hermitian")
}

/// Random pair `(A, B)` with `B ≥ 0` of rank `rank`.
pub fn random_pair(n: usize, rank: usize, seed: u64) -> Result<OperatorPair> {
    OperatorPair::new(
        random_hermitian(n, 1.0, seed),
        random_psd(n, rank, seed.wrapping_add(0x9e37_79b9)),
    )
}

/// Unit vector `B x / ‖B x‖` in `Range(B)`.
pub fn range_vector(pair: &OperatorPair, seed: u64) -> Vector {
    let x = random_vector(pair.dim(), seed);
    let v = pair.b().matrix() * x;
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}
