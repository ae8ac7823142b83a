//! C ABI over the `bellscope` library.
//!
//! Conventions: every fallible entry point returns a [`BellscopeStatus`] and
//! writes its result through out-pointers; heap-backed results travel as
//! opaque handles with explicit `_free` functions; panics never cross the
//! boundary (they surface as `InternalError`).

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, UnwindSafe};

use bellscope::{
    classical_max, intersection_bounds, lhv_chsh_value, optimize_bound, quantum_chsh_value,
    quantum_correlation, regime_ceiling, union_bounds, verify_ceiling, zero_expression_audit,
    BoundResult, CommutationRegime, EstimationMethod, HiddenVariableModel, MeasurementSettings,
    OptimizerConfig, SpectrumClass, StateKind, TwoParticleState,
};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellscopeStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation (dimension, budget, probability range,
    /// unknown model/state name, non-finite angle).
    InvalidArgument = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
    /// The provided buffer is too small.
    BufferTooSmall = 4,
    /// An internal invariant failed.
    InternalError = 5,
}

/// Commutation regime selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellscopeRegime {
    Classical = 0,
    Tensor = 1,
    Global = 2,
}

impl From<BellscopeRegime> for CommutationRegime {
    fn from(r: BellscopeRegime) -> Self {
        match r {
            BellscopeRegime::Classical => CommutationRegime::Classical,
            BellscopeRegime::Tensor => CommutationRegime::LocalTensor,
            BellscopeRegime::Global => CommutationRegime::Global,
        }
    }
}

/// Observable spectrum class selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellscopeSpectrumClass {
    Dichotomic = 0,
    Contraction = 1,
}

impl From<BellscopeSpectrumClass> for SpectrumClass {
    fn from(c: BellscopeSpectrumClass) -> Self {
        match c {
            BellscopeSpectrumClass::Dichotomic => SpectrumClass::Dichotomic,
            BellscopeSpectrumClass::Contraction => SpectrumClass::Contraction,
        }
    }
}

/// Two-particle state selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellscopeState {
    Singlet = 0,
    Photon = 1,
}

impl From<BellscopeState> for StateKind {
    fn from(s: BellscopeState) -> Self {
        match s {
            BellscopeState::Singlet => StateKind::SpinSinglet,
            BellscopeState::Photon => StateKind::PhotonCascade,
        }
    }
}

/// Opaque handle to a bound-search result; release with
/// [`bellscope_bound_result_free`].
pub struct BellscopeBoundResult {
    inner: BoundResult,
}

fn guarded<F: FnOnce() -> BellscopeStatus + UnwindSafe>(f: F) -> BellscopeStatus {
    catch_unwind(f).unwrap_or(BellscopeStatus::InternalError)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bellscope_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Human-readable name of a status code (static storage).
#[no_mangle]
pub extern "C" fn bellscope_status_name(status: BellscopeStatus) -> *const c_char {
    let name: &'static str = match status {
        BellscopeStatus::Ok => "ok\0",
        BellscopeStatus::NullPointer => "null pointer\0",
        BellscopeStatus::InvalidArgument => "invalid argument\0",
        BellscopeStatus::InvalidUtf8 => "invalid utf-8\0",
        BellscopeStatus::BufferTooSmall => "buffer too small\0",
        BellscopeStatus::InternalError => "internal error\0",
    };
    name.as_ptr() as *const c_char
}

/// Run the multi-start bound search (brute force in the classical regime).
///
/// `dim` is the per-factor dimension in the tensor regime and the total
/// dimension otherwise; pass 0 for `restarts`, `max_iters` to use defaults.
/// On success `*out` owns a fresh handle.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_bounds_run(
    regime: BellscopeRegime,
    dim: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    spectrum_class: BellscopeSpectrumClass,
    out: *mut *mut BellscopeBoundResult,
) -> BellscopeStatus {
    if out.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let defaults = OptimizerConfig::default();
        let cfg = OptimizerConfig {
            dim,
            restarts: if restarts == 0 {
                defaults.restarts
            } else {
                restarts
            },
            max_iters: if max_iters == 0 {
                defaults.max_iters
            } else {
                max_iters
            },
            seed,
            spectrum_class: spectrum_class.into(),
            ..defaults
        };
        match optimize_bound(regime.into(), &cfg) {
            Ok(result) => {
                let handle = Box::new(BellscopeBoundResult { inner: result });
                unsafe { *out = Box::into_raw(handle) };
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Classical brute-force maximum (always exactly 2).
#[no_mangle]
pub extern "C" fn bellscope_classical_max() -> f64 {
    classical_max().best_value
}

/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_best_value(
    result: *const BellscopeBoundResult,
) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    unsafe { &*result }.inner.best_value
}

/// Regime ceiling (2, 2*sqrt(2) or 2*sqrt(3)) for the result's regime.
///
/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_ceiling(
    result: *const BellscopeBoundResult,
) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    regime_ceiling(unsafe { &*result }.inner.regime)
}

/// Whether the best value respects the regime ceiling; false is a
/// falsification event.
///
/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_ceiling_respected(
    result: *const BellscopeBoundResult,
) -> bool {
    if result.is_null() {
        return false;
    }
    verify_ceiling(&unsafe { &*result }.inner)
}

/// Largest lambda_max(B'B) observed on any evaluated iterate.
///
/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_max_bstarb(
    result: *const BellscopeBoundResult,
) -> f64 {
    if result.is_null() {
        return f64::NAN;
    }
    unsafe { &*result }.inner.max_bstarb
}

/// Total ascent iterations across restarts.
///
/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_iterations(
    result: *const BellscopeBoundResult,
) -> usize {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.inner.iterations
}

/// Number of per-restart values available.
///
/// # Safety
/// `result` must be a live handle from [`bellscope_bounds_run`].
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_restart_count(
    result: *const BellscopeBoundResult,
) -> usize {
    if result.is_null() {
        return 0;
    }
    unsafe { &*result }.inner.per_restart_values.len()
}

/// Copy the per-restart values (restart order) into `buffer`.
///
/// # Safety
/// `result` must be a live handle and `buffer` must point to at least `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_restart_values(
    result: *const BellscopeBoundResult,
    buffer: *mut f64,
    len: usize,
) -> BellscopeStatus {
    if result.is_null() || buffer.is_null() {
        return BellscopeStatus::NullPointer;
    }
    let values = &unsafe { &*result }.inner.per_restart_values;
    if len < values.len() {
        return BellscopeStatus::BufferTooSmall;
    }
    unsafe { std::ptr::copy_nonoverlapping(values.as_ptr(), buffer, values.len()) };
    BellscopeStatus::Ok
}

/// Release a bound-result handle. Null is a no-op.
///
/// # Safety
/// `result` must be null or a handle from [`bellscope_bounds_run`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn bellscope_bound_result_free(result: *mut BellscopeBoundResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

/// Quantum correlator `E(alpha, beta)` for a built-in state.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_quantum_correlation(
    state: BellscopeState,
    alpha: f64,
    beta: f64,
    out: *mut f64,
) -> BellscopeStatus {
    if out.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let two_particle = TwoParticleState::new(state.into());
        match quantum_correlation(&two_particle, alpha, beta) {
            Ok(v) => {
                unsafe { *out = v };
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Quantum CHSH value at the four orientations.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_quantum_chsh(
    state: BellscopeState,
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    out: *mut f64,
) -> BellscopeStatus {
    if out.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let settings = match MeasurementSettings::new(alpha1, alpha2, beta1, beta2) {
            Ok(s) => s,
            Err(_) => return BellscopeStatus::InvalidArgument,
        };
        let two_particle = TwoParticleState::new(state.into());
        match quantum_chsh_value(&two_particle, &settings) {
            Ok(v) => {
                unsafe { *out = v };
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

fn model_from_c(name: *const c_char) -> Result<HiddenVariableModel, BellscopeStatus> {
    if name.is_null() {
        return Err(BellscopeStatus::NullPointer);
    }
    let name = unsafe { CStr::from_ptr(name) }
        .to_str()
        .map_err(|_| BellscopeStatus::InvalidUtf8)?;
    HiddenVariableModel::by_name(name).map_err(|_| BellscopeStatus::InvalidArgument)
}

/// Hidden-variable CHSH by quadrature for a built-in model
/// (sign-cos, constant, smooth-cos).
///
/// # Safety
/// `model` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_lhv_chsh_quadrature(
    model: *const c_char,
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    nodes: usize,
    out: *mut f64,
) -> BellscopeStatus {
    if out.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_from_c(model) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let settings = match MeasurementSettings::new(alpha1, alpha2, beta1, beta2) {
            Ok(s) => s,
            Err(_) => return BellscopeStatus::InvalidArgument,
        };
        match lhv_chsh_value(&model, &settings, EstimationMethod::Quadrature, nodes) {
            Ok(estimate) => {
                unsafe { *out = estimate.value };
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Hidden-variable CHSH by seeded Monte Carlo; also reports the aggregated
/// standard error when `out_stderr` is non-null.
///
/// # Safety
/// `model` must be a NUL-terminated string and `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_lhv_chsh_monte_carlo(
    model: *const c_char,
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    samples: usize,
    seed: u64,
    out_value: *mut f64,
    out_stderr: *mut f64,
) -> BellscopeStatus {
    if out_value.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_from_c(model) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let settings = match MeasurementSettings::new(alpha1, alpha2, beta1, beta2) {
            Ok(s) => s,
            Err(_) => return BellscopeStatus::InvalidArgument,
        };
        match lhv_chsh_value(
            &model,
            &settings,
            EstimationMethod::MonteCarlo { seed },
            samples,
        ) {
            Ok(estimate) => {
                unsafe { *out_value = estimate.value };
                if !out_stderr.is_null() {
                    unsafe { *out_stderr = estimate.aggregate_stderr };
                }
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Quadrature residue of the identically-zero reordering expression.
///
/// # Safety
/// `model` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bellscope_lhv_zero_expression_residue(
    model: *const c_char,
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
    nodes: usize,
    out: *mut f64,
) -> BellscopeStatus {
    if out.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let model = match model_from_c(model) {
            Ok(m) => m,
            Err(status) => return status,
        };
        let settings = match MeasurementSettings::new(alpha1, alpha2, beta1, beta2) {
            Ok(s) => s,
            Err(_) => return BellscopeStatus::InvalidArgument,
        };
        match zero_expression_audit(&model, &settings, nodes) {
            Ok(residue) => {
                unsafe { *out = residue };
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Boole union bounds `[max p_i, min(1, sum p_i)]`.
///
/// # Safety
/// `probs` must point to `n` doubles; `out_lo`/`out_hi` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bellscope_boole_union_bounds(
    probs: *const f64,
    n: usize,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> BellscopeStatus {
    if probs.is_null() || out_lo.is_null() || out_hi.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let slice = unsafe { std::slice::from_raw_parts(probs, n) };
        match union_bounds(slice) {
            Ok(b) => {
                unsafe {
                    *out_lo = b.lo;
                    *out_hi = b.hi;
                }
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}

/// Boole intersection bounds `[max(0, sum p_i - n + 1), min p_i]`.
///
/// # Safety
/// `probs` must point to `n` doubles; `out_lo`/`out_hi` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bellscope_boole_intersection_bounds(
    probs: *const f64,
    n: usize,
    out_lo: *mut f64,
    out_hi: *mut f64,
) -> BellscopeStatus {
    if probs.is_null() || out_lo.is_null() || out_hi.is_null() {
        return BellscopeStatus::NullPointer;
    }
    guarded(|| {
        let slice = unsafe { std::slice::from_raw_parts(probs, n) };
        match intersection_bounds(slice) {
            Ok(b) => {
                unsafe {
                    *out_lo = b.lo;
                    *out_hi = b.hi;
                }
                BellscopeStatus::Ok
            }
            Err(_) => BellscopeStatus::InvalidArgument,
        }
    })
}
