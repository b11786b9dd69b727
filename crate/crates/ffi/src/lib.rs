//! C ABI over `mzi_parity`.
//!
//! States are opaque heap handles created by the `mzp_state_*` constructors
//! and released with `mzp_state_free`. Every entry point returns an
//! [`MzpStatus`]; on failure `mzp_last_error_message` describes the error
//! for the calling thread. Spin labels are passed doubled (`two_j = 2j`) so
//! half-integers stay integral.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mzi_parity::detection;
use mzi_parity::interferometer;
use mzi_parity::states::{self, CombinedStateParams, StateFamily};
use mzi_parity::wigner;
use mzi_parity::{Error, Frame, HalfInt, TwoModeState};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzpStatus {
    Ok = 0,
    InvalidArgument = 1,
    FrameError = 2,
    NumericalLimit = 3,
    Internal = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzpFrame {
    AtInput = 0,
    InsideInterferometer = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MzpDetectionResult {
    pub phi: f64,
    pub expectation: f64,
    pub derivative: f64,
    pub variance: f64,
    /// Positive infinity where the slope vanishes.
    pub delta_phi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MzpBenchmarkLimits {
    pub n: u32,
    pub shot_noise: f64,
    pub heisenberg: f64,
    pub bw_povm: f64,
}

/// Opaque two-mode state.
pub struct MzpState {
    inner: TwoModeState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> MzpStatus {
    match err {
        Error::Domain(_) | Error::InvalidIndex { .. } | Error::UnknownState(_) | Error::Config(_) => {
            MzpStatus::InvalidArgument
        }
        Error::Frame { .. } => MzpStatus::FrameError,
        Error::NumericalLimit(_) => MzpStatus::NumericalLimit,
        _ => MzpStatus::Internal,
    }
}

struct Failure(MzpStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure(status_of(&err), err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MzpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MzpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MzpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| (*s).to_owned())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_last_error(format!("panic: {msg}"));
            MzpStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(state: *const MzpState) -> Result<&'a TwoModeState, Failure> {
    state.as_ref().map(|s| &s.inner).ok_or_else(|| null("state"))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_state(out: *mut *mut MzpState, state: TwoModeState) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(MzpState { inner: state })))
}

fn half(two: i32) -> HalfInt {
    HalfInt::from_twice(two)
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mzp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Build a named state family with `n` photons (`"noon"`, `"pezze-smerzi"`,
/// ...). For `"coherent"`, `n` is the mean photon number; `"combined"` needs
/// `mzp_state_combined`.
///
/// # Safety
/// `label` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_new(label: *const c_char, n: u32, out: *mut *mut MzpState) -> MzpStatus {
    guard(|| {
        if label.is_null() {
            return Err(null("label"));
        }
        let label = CStr::from_ptr(label)
            .to_str()
            .map_err(|_| Failure(MzpStatus::InvalidArgument, "label is not UTF-8".into()))?;
        let state = StateFamily::from_label(label, None)?.build(n)?;
        emit_state(out, state)
    })
}

/// Normalized `alpha |NOON>_in + beta |dual Fock>` with magnitudes
/// `alpha_mag`, `beta_mag` and relative phase `theta`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_combined(
    n: u32,
    alpha_mag: f64,
    beta_mag: f64,
    theta: f64,
    out: *mut *mut MzpState,
) -> MzpStatus {
    guard(|| {
        let params = CombinedStateParams::new(alpha_mag, beta_mag, theta)?;
        emit_state(out, states::combined_input(n, &params)?)
    })
}

/// Coherent state with mean photon number `nbar` in mode a, truncated once
/// the discarded Poisson tail drops below `tail_bound`.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_coherent(
    nbar: f64,
    phase: f64,
    tail_bound: f64,
    out: *mut *mut MzpState,
) -> MzpStatus {
    guard(|| emit_state(out, states::coherent_input(nbar, phase, tail_bound)?))
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_free(state: *mut MzpState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_frame(state: *const MzpState, out: *mut MzpFrame) -> MzpStatus {
    guard(|| {
        let frame = match state_ref(state)?.frame() {
            Frame::AtInput => MzpFrame::AtInput,
            Frame::InsideInterferometer => MzpFrame::InsideInterferometer,
        };
        write_out(out, frame)
    })
}

/// Squared norm and mean photon number.
///
/// # Safety
/// `state` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn mzp_state_moments(
    state: *const MzpState,
    norm_sqr: *mut f64,
    mean_photons: *mut f64,
) -> MzpStatus {
    guard(|| {
        let s = state_ref(state)?;
        write_out(norm_sqr, s.norm_sqr())?;
        write_out(mean_photons, s.mean_photon_number())
    })
}

/// Full interferometer `exp(-i phi J_y)` on an input-frame state; writes a
/// new handle.
///
/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_apply_mzi(state: *const MzpState, phi: f64, out: *mut *mut MzpState) -> MzpStatus {
    guard(|| emit_state(out, interferometer::apply_mzi(state_ref(state)?, phi)?))
}

/// 50:50 beam splitter (`inverse` selects the second one); toggles the frame.
///
/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_apply_beam_splitter(
    state: *const MzpState,
    inverse: bool,
    out: *mut *mut MzpState,
) -> MzpStatus {
    guard(|| emit_state(out, interferometer::apply_beam_splitter(state_ref(state)?, inverse)?))
}

/// Phase shifter `exp(-i phi J_z)` on an inside-frame state.
///
/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_apply_phase_shifter(
    state: *const MzpState,
    phi: f64,
    out: *mut *mut MzpState,
) -> MzpStatus {
    guard(|| emit_state(out, interferometer::apply_phase_shifter(state_ref(state)?, phi)?))
}

/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_parity_expectation(state: *const MzpState, phi: f64, out: *mut f64) -> MzpStatus {
    guard(|| write_out(out, detection::parity_expectation(state_ref(state)?, phi)?))
}

/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_parity_derivative(state: *const MzpState, phi: f64, out: *mut f64) -> MzpStatus {
    guard(|| write_out(out, detection::parity_derivative(state_ref(state)?, phi)?))
}

/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_phase_uncertainty(
    state: *const MzpState,
    phi: f64,
    out: *mut MzpDetectionResult,
) -> MzpStatus {
    guard(|| {
        let r = detection::phase_uncertainty(state_ref(state)?, phi)?;
        write_out(
            out,
            MzpDetectionResult {
                phi: r.phi,
                expectation: r.expectation,
                derivative: r.derivative,
                variance: r.variance,
                delta_phi: r.delta_phi,
            },
        )
    })
}

/// Phase uncertainty in the `phi -> 0` limit.
///
/// # Safety
/// `state` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_phase_uncertainty_limit(state: *const MzpState, out: *mut f64) -> MzpStatus {
    guard(|| write_out(out, detection::phase_uncertainty_limit(state_ref(state)?)?))
}

/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_benchmark_limits(n: u32, out: *mut MzpBenchmarkLimits) -> MzpStatus {
    guard(|| {
        let b = detection::benchmark_limits(n)?;
        write_out(
            out,
            MzpBenchmarkLimits { n: b.n, shot_noise: b.shot_noise, heisenberg: b.heisenberg, bw_povm: b.bw_povm },
        )
    })
}

/// Wigner element `d^j_{mu', mu}(theta)` with doubled labels.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_d_element(two_j: i32, two_mu_p: i32, two_mu: i32, theta: f64, out: *mut f64) -> MzpStatus {
    guard(|| write_out(out, wigner::d_element(half(two_j), half(two_mu_p), half(two_mu), theta)?))
}

/// `d/dtheta d^j_{mu', mu}(theta)` with doubled labels.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mzp_d_derivative(
    two_j: i32,
    two_mu_p: i32,
    two_mu: i32,
    theta: f64,
    out: *mut f64,
) -> MzpStatus {
    guard(|| write_out(out, wigner::d_derivative(half(two_j), half(two_mu_p), half(two_mu), theta)?))
}
