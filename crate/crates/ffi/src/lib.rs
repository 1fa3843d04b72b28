//! C ABI over `specavg`.
//!
//! Every object crosses the boundary as an opaque heap handle created by a
//! `sa_*_new`-style function and released by the matching `sa_*_free`.
//! Functions return an [`SaStatus`]; on failure the message is available from
//! [`sa_last_error_message`] on the same thread until the next failing call.
//! Complex vectors are passed as separate real and imaginary arrays; a null
//! imaginary pointer means zero.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use specavg::averaging::average_spectral_measure;
use specavg::measure::modulus_of_continuity;
use specavg::random_model::{ids_estimate, CouplingLaw, EnergyBins, IdsEstimate, RandomModel, Sampling, SiteProfile};
use specavg::spectral::{cyclicity_rank, spectral_measure, Vector};
use specavg::{Error, HermitianOperator, OperatorPair, PointMeasure, QuadratureRule, WeightProfile, C64};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    NotHermitian = 4,
    NotPositiveSemidefinite = 5,
    NoConvergence = 6,
    BufferTooSmall = 7,
    Io = 8,
    Panic = 9,
}

pub struct SaOperator(HermitianOperator);
pub struct SaPair(OperatorPair);
pub struct SaProfile(WeightProfile);
pub struct SaMeasure(PointMeasure);
pub struct SaModel(RandomModel);
pub struct SaIds(IdsEstimate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(SaStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::DimensionMismatch { .. } => SaStatus::DimensionMismatch,
            Error::NotHermitian { .. } => SaStatus::NotHermitian,
            Error::NotPositiveSemidefinite { .. } => SaStatus::NotPositiveSemidefinite,
            Error::NoConvergence { .. } => SaStatus::NoConvergence,
            Error::Io(_) => SaStatus::Io,
            _ => SaStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> SaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SaStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn complex_vector(re: *const f64, im: *const f64, len: usize) -> Result<Vector, Failure> {
    let re = slice(re, len, "real part")?;
    let im = if im.is_null() { None } else { Some(slice(im, len, "imaginary part")?) };
    Ok(Vector::from_fn(len, |i, _| C64::new(re[i], im.map_or(0.0, |im| im[i]))))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_scalar<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = value;
    Ok(())
}

unsafe fn copy_out(values: &[f64], buf: *mut f64, cap: usize) -> Outcome {
    if cap < values.len() {
        return Err(Failure(
            SaStatus::BufferTooSmall,
            format!("buffer holds {cap} values, {} needed", values.len()),
        ));
    }
    if values.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("output buffer"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message of the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn sa_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Hermitian operator from an `n × n` row-major matrix. `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `n * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_operator_new(n: usize, re: *const f64, im: *const f64, out: *mut *mut SaOperator) -> SaStatus {
    guard(|| {
        let len = n.checked_mul(n).ok_or_else(|| Failure(SaStatus::InvalidArgument, "n * n overflows".into()))?;
        let values = complex_vector(re, im, len)?;
        let m = nalgebra::DMatrix::from_row_slice(n, n, values.as_slice());
        emit(out, SaOperator(HermitianOperator::new(m)?))
    })
}

/// # Safety
/// `op` must be null or a handle from `sa_operator_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sa_operator_free(op: *mut SaOperator) {
    release(op)
}

/// # Safety
/// `op` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_operator_dim(op: *const SaOperator, out: *mut usize) -> SaStatus {
    guard(|| write_scalar(out, borrow(op, "operator")?.0.dim()))
}

/// Ascending eigenvalues into `buf`, which must hold `dim` values.
///
/// # Safety
/// `op` must be a live handle; `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_operator_eigenvalues(op: *const SaOperator, buf: *mut f64, cap: usize) -> SaStatus {
    guard(|| copy_out(&borrow(op, "operator")?.0.eigenvalues()?, buf, cap))
}

/// Spectral measure of `op` at the vector `phi` of length `n`.
///
/// # Safety
/// `op` must be a live handle; `phi_re` (and `phi_im` when non-null) must
/// point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_spectral_measure(
    op: *const SaOperator,
    phi_re: *const f64,
    phi_im: *const f64,
    n: usize,
    out: *mut *mut SaMeasure,
) -> SaStatus {
    guard(|| {
        let op = borrow(op, "operator")?;
        let phi = complex_vector(phi_re, phi_im, n)?;
        emit(out, SaMeasure(spectral_measure(&op.0, &phi)?))
    })
}

/// Pair `(A, B)` with `B ≥ 0`. The operators are copied.
///
/// # Safety
/// `a` and `b` must be live operator handles.
#[no_mangle]
pub unsafe extern "C" fn sa_pair_new(a: *const SaOperator, b: *const SaOperator, out: *mut *mut SaPair) -> SaStatus {
    guard(|| {
        let a = borrow(a, "A")?.0.clone();
        let b = borrow(b, "B")?.0.clone();
        emit(out, SaPair(OperatorPair::new(a, b)?))
    })
}

/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_pair_free(pair: *mut SaPair) {
    release(pair)
}

/// Dimension of the cyclic subspace generated by `Range(B)` under `A`.
///
/// # Safety
/// `pair` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_pair_cyclicity_rank(pair: *const SaPair, out: *mut usize) -> SaStatus {
    guard(|| write_scalar(out, cyclicity_rank(&borrow(pair, "pair")?.0)?))
}

/// `‖Φ − P_{Range B} Φ‖`.
///
/// # Safety
/// `pair` must be a live handle; `phi_re` (and `phi_im` when non-null) must
/// point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_pair_range_defect(
    pair: *const SaPair,
    phi_re: *const f64,
    phi_im: *const f64,
    n: usize,
    out: *mut f64,
) -> SaStatus {
    guard(|| {
        let pair = borrow(pair, "pair")?;
        let phi = complex_vector(phi_re, phi_im, n)?;
        write_scalar(out, pair.0.range_defect(&phi)?)
    })
}

/// Uniform density on `[a, b]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sa_profile_uniform(a: f64, b: f64, out: *mut *mut SaProfile) -> SaStatus {
    guard(|| emit(out, SaProfile(WeightProfile::uniform(a, b)?)))
}

/// Symmetric triangular density on `[a, b]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sa_profile_triangular(a: f64, b: f64, out: *mut *mut SaProfile) -> SaStatus {
    guard(|| emit(out, SaProfile(WeightProfile::triangular(a, b)?)))
}

/// Gaussian density truncated to `[a, b]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sa_profile_truncated_gaussian(
    mean: f64,
    sigma: f64,
    a: f64,
    b: f64,
    out: *mut *mut SaProfile,
) -> SaStatus {
    guard(|| emit(out, SaProfile(WeightProfile::truncated_gaussian(mean, sigma, a, b)?)))
}

/// Piecewise-linear profile through `(knots[i], values[i])`.
///
/// # Safety
/// `knots` and `values` must point to `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn sa_profile_table(
    knots: *const f64,
    values: *const f64,
    len: usize,
    out: *mut *mut SaProfile,
) -> SaStatus {
    guard(|| {
        let knots = slice(knots, len, "knots")?.to_vec();
        let values = slice(values, len, "values")?.to_vec();
        emit(out, SaProfile(WeightProfile::table(knots, values)?))
    })
}

/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_profile_free(profile: *mut SaProfile) {
    release(profile)
}

/// Averaged measure `∫ h(t) ρ_{A+tB}^Φ dt` by a composite Gauss rule with
/// `nodes` points on the support of `h`. `range_defect` may be null.
///
/// # Safety
/// Handles must be live; `phi_re` (and `phi_im` when non-null) must point to
/// `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_average(
    pair: *const SaPair,
    phi_re: *const f64,
    phi_im: *const f64,
    n: usize,
    profile: *const SaProfile,
    nodes: usize,
    out: *mut *mut SaMeasure,
    range_defect: *mut f64,
) -> SaStatus {
    guard(|| {
        let pair = borrow(pair, "pair")?;
        let h = borrow(profile, "profile")?;
        let phi = complex_vector(phi_re, phi_im, n)?;
        let rule = QuadratureRule::for_profile(&h.0, nodes)?;
        let avg = average_spectral_measure(&pair.0, &phi, &h.0, &rule)?;
        if !range_defect.is_null() {
            *range_defect = avg.range_defect;
        }
        emit(out, SaMeasure(avg.measure))
    })
}

/// # Safety
/// `m` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_measure_free(m: *mut SaMeasure) {
    release(m)
}

/// Number of atoms.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_measure_len(m: *const SaMeasure, out: *mut usize) -> SaStatus {
    guard(|| write_scalar(out, borrow(m, "measure")?.0.len()))
}

/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_measure_total_mass(m: *const SaMeasure, out: *mut f64) -> SaStatus {
    guard(|| write_scalar(out, borrow(m, "measure")?.0.total_mass()))
}

/// Atom locations (increasing) and weights; both buffers hold `cap` values.
///
/// # Safety
/// `m` must be a live handle; `locations` and `weights` must point to `cap`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_measure_atoms(
    m: *const SaMeasure,
    locations: *mut f64,
    weights: *mut f64,
    cap: usize,
) -> SaStatus {
    guard(|| {
        let m = borrow(m, "measure")?;
        copy_out(m.0.locations(), locations, cap)?;
        copy_out(m.0.weights(), weights, cap)
    })
}

/// Largest mass on an interval of length `eps`.
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_measure_modulus(m: *const SaMeasure, eps: f64, out: *mut f64) -> SaStatus {
    guard(|| write_scalar(out, modulus_of_continuity(&borrow(m, "measure")?.0, eps)?))
}

unsafe fn site_profile(u: *const f64, mesh: usize) -> Result<SiteProfile, Failure> {
    if u.is_null() {
        Ok(SiteProfile::Indicator)
    } else {
        Ok(SiteProfile::Bump(slice(u, mesh, "u")?.to_vec()))
    }
}

/// Random model with couplings drawn from the density `law`. `u` holds
/// `mesh` single-site values or is null for the indicator of a cell.
///
/// # Safety
/// `law` must be a live handle; `u` must be null or point to `mesh` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_model_new_density(
    cells: usize,
    mesh: usize,
    u: *const f64,
    law: *const SaProfile,
    out: *mut *mut SaModel,
) -> SaStatus {
    guard(|| {
        let law = CouplingLaw::Density(borrow(law, "law")?.0.clone());
        emit(out, SaModel(RandomModel::new(cells, mesh, site_profile(u, mesh)?, law, None)?))
    })
}

/// Random model with couplings taking `values[i]` with probability `probs[i]`.
///
/// # Safety
/// `u` must be null or point to `mesh` doubles; `values` and `probs` must
/// point to `k` doubles each.
#[no_mangle]
pub unsafe extern "C" fn sa_model_new_discrete(
    cells: usize,
    mesh: usize,
    u: *const f64,
    values: *const f64,
    probs: *const f64,
    k: usize,
    out: *mut *mut SaModel,
) -> SaStatus {
    guard(|| {
        let law = CouplingLaw::Discrete {
            values: slice(values, k, "values")?.to_vec(),
            probs: slice(probs, k, "probs")?.to_vec(),
        };
        emit(out, SaModel(RandomModel::new(cells, mesh, site_profile(u, mesh)?, law, None)?))
    })
}

/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_model_free(model: *mut SaModel) {
    release(model)
}

/// Monte Carlo IDS estimate over `samples` draws, binned into `bins` bins.
/// Masses are traces over one cell, so they sum to `mesh`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_ids_monte_carlo(
    model: *const SaModel,
    samples: usize,
    seed: u64,
    bins: usize,
    out: *mut *mut SaIds,
) -> SaStatus {
    guard(|| {
        let model = borrow(model, "model")?;
        let est = ids_estimate(&model.0, Sampling::MonteCarlo { samples, seed }, EnergyBins::Count(bins))?;
        emit(out, SaIds(est))
    })
}

/// Exact IDS over every outcome of a discrete law.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sa_ids_enumerate(model: *const SaModel, bins: usize, out: *mut *mut SaIds) -> SaStatus {
    guard(|| {
        let model = borrow(model, "model")?;
        emit(out, SaIds(ids_estimate(&model.0, Sampling::Enumerate, EnergyBins::Count(bins))?))
    })
}

/// # Safety
/// `ids` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_ids_free(ids: *mut SaIds) {
    release(ids)
}

/// Bin grid: left edge of bin 0, bin width and bin count. Any output may be null.
///
/// # Safety
/// `ids` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sa_ids_grid(ids: *const SaIds, origin: *mut f64, width: *mut f64, count: *mut usize) -> SaStatus {
    guard(|| {
        let ids = &borrow(ids, "ids")?.0;
        if !origin.is_null() {
            *origin = ids.origin;
        }
        if !width.is_null() {
            *width = ids.width;
        }
        if !count.is_null() {
            *count = ids.masses.len();
        }
        Ok(())
    })
}

/// Per-bin masses and their standard errors; `std_err` may be null.
///
/// # Safety
/// `ids` must be a live handle; buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn sa_ids_masses(ids: *const SaIds, masses: *mut f64, std_err: *mut f64, cap: usize) -> SaStatus {
    guard(|| {
        let ids = &borrow(ids, "ids")?.0;
        copy_out(&ids.masses, masses, cap)?;
        if !std_err.is_null() {
            copy_out(&ids.std_err, std_err, cap)?;
        }
        Ok(())
    })
}
