use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use mzi_parity_ffi::*;

fn new_state(label: &str, n: u32) -> *mut MzpState {
    let label = CString::new(label).unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { mzp_state_new(label.as_ptr(), n, &mut out) }, MzpStatus::Ok);
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    let p = mzp_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn noon_reaches_the_heisenberg_limit() {
    let state = new_state("noon", 6);
    let mut r = MzpDetectionResult::default();
    assert_eq!(unsafe { mzp_phase_uncertainty(state, 0.2, &mut r) }, MzpStatus::Ok);
    assert!((r.delta_phi - 1.0 / 6.0).abs() < 1e-9);
    assert!((r.variance.powi(2) + r.expectation.powi(2) - 1.0).abs() < 1e-12);
    let mut limit = 0.0;
    assert_eq!(unsafe { mzp_phase_uncertainty_limit(state, &mut limit) }, MzpStatus::Ok);
    assert!((limit - 1.0 / 6.0).abs() < 1e-9);
    unsafe { mzp_state_free(state) };
}

#[test]
fn pipeline_matches_the_direct_route() {
    let input = new_state("pezze-smerzi", 8);
    let (mut inside, mut shifted, mut out, mut direct) =
        (ptr::null_mut(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(mzp_apply_beam_splitter(input, false, &mut inside), MzpStatus::Ok);
        let mut frame = MzpFrame::AtInput;
        assert_eq!(mzp_state_frame(inside, &mut frame), MzpStatus::Ok);
        assert_eq!(frame, MzpFrame::InsideInterferometer);
        assert_eq!(mzp_apply_phase_shifter(inside, 0.3, &mut shifted), MzpStatus::Ok);
        assert_eq!(mzp_apply_beam_splitter(shifted, true, &mut out), MzpStatus::Ok);
        assert_eq!(mzp_apply_mzi(input, 0.3, &mut direct), MzpStatus::Ok);

        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(mzp_parity_expectation(inside, 0.3, &mut a), MzpStatus::Ok);
        assert_eq!(mzp_parity_expectation(input, 0.3, &mut b), MzpStatus::Ok);
        assert!((a - b).abs() < 1e-10);

        let (mut norm, mut mean) = (0.0, 0.0);
        assert_eq!(mzp_state_moments(out, &mut norm, &mut mean), MzpStatus::Ok);
        assert!((norm - 1.0).abs() < 1e-12 && (mean - 8.0).abs() < 1e-12);

        for s in [input, inside, shifted, out, direct] {
            mzp_state_free(s);
        }
    }
}

#[test]
fn error_codes() {
    let mut out = ptr::null_mut();
    let bad = CString::new("squeezed").unwrap();
    assert_eq!(unsafe { mzp_state_new(bad.as_ptr(), 4, &mut out) }, MzpStatus::InvalidArgument);
    assert!(last_error().contains("squeezed"));
    assert!(out.is_null());

    let odd = CString::new("pezze-smerzi").unwrap();
    assert_eq!(unsafe { mzp_state_new(odd.as_ptr(), 5, &mut out) }, MzpStatus::InvalidArgument);

    assert_eq!(unsafe { mzp_state_new(ptr::null(), 4, &mut out) }, MzpStatus::NullPointer);
    let mut x = 0.0;
    assert_eq!(unsafe { mzp_parity_expectation(ptr::null(), 0.1, &mut x) }, MzpStatus::NullPointer);

    // phase shifter needs the inside frame
    let input = new_state("noon", 4);
    assert_eq!(unsafe { mzp_apply_phase_shifter(input, 0.1, &mut out) }, MzpStatus::FrameError);
    assert!(last_error().contains("frame"));
    unsafe { mzp_state_free(input) };

    assert_eq!(unsafe { mzp_state_combined(4, 0.9, 0.9, 0.0, &mut out) }, MzpStatus::InvalidArgument);
    assert_eq!(unsafe { mzp_d_element(2, 4, 0, 0.1, &mut x) }, MzpStatus::InvalidArgument);
    unsafe { mzp_state_free(ptr::null_mut()) };
}

#[test]
fn wigner_and_benchmarks() {
    let (mut d, mut dd) = (0.0, 0.0);
    unsafe {
        assert_eq!(mzp_d_element(2, 0, 0, 0.7, &mut d), MzpStatus::Ok);
        assert_eq!(mzp_d_derivative(2, 0, 0, 0.7, &mut dd), MzpStatus::Ok);
    }
    assert!((d - 0.7f64.cos()).abs() < 1e-15);
    assert!((dd + 0.7f64.sin()).abs() < 1e-14);

    let mut b = MzpBenchmarkLimits::default();
    assert_eq!(unsafe { mzp_benchmark_limits(2, &mut b) }, MzpStatus::Ok);
    assert_eq!(b.bw_povm, 1.0);
    assert_eq!(b.n, 2);
    assert_eq!(unsafe { mzp_benchmark_limits(0, &mut b) }, MzpStatus::InvalidArgument);
}

#[test]
fn combined_and_coherent_constructors() {
    let mut s = ptr::null_mut();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (mut norm, mut mean, mut limit) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(mzp_state_combined(8, h, h, 0.0, &mut s), MzpStatus::Ok);
        assert_eq!(mzp_state_moments(s, &mut norm, &mut mean), MzpStatus::Ok);
        mzp_state_free(s);
        assert!((norm - 1.0).abs() < 1e-12 && (mean - 8.0).abs() < 1e-12);

        assert_eq!(mzp_state_coherent(9.0, 0.0, 1e-12, &mut s), MzpStatus::Ok);
        assert_eq!(mzp_phase_uncertainty_limit(s, &mut limit), MzpStatus::Ok);
        mzp_state_free(s);
    }
    assert!((limit - 1.0 / 3.0).abs() < 1e-6);
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("mzi_parity.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for symbol in [
        "mzp_state_new",
        "mzp_state_free",
        "mzp_phase_uncertainty",
        "MZP_STATUS_FRAME_ERROR",
        "typedef struct MzpState MzpState",
    ] {
        assert!(text.contains(symbol), "{symbol}");
    }
    let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"]).arg(&header).status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
