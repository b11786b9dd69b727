//! Parity expectation values, the error-propagation phase uncertainty and
//! its small-phase limit, the per-family closed forms, and the benchmark
//! limits.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::interferometer::{self, i_pow, parity_sign};
use crate::states::{self, CombinedStateParams, Frame, StateFamily, TwoModeState};
use crate::wigner::{self, RotationAt};

const NORM_TOLERANCE: f64 = 1e-9;
const RESIDUE_TOLERANCE: f64 = 1e-10;
/// Below this slope the phase is treated as unresolvable.
pub const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Detection statistics at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub phi: f64,
    pub expectation: f64,
    pub derivative: f64,
    /// Standard deviation of the parity, `sqrt(1 - <P>^2)`.
    pub variance: f64,
    pub delta_phi: f64,
}

/// Reference uncertainties for N photons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkLimits {
    pub n: u32,
    pub shot_noise: f64,
    pub heisenberg: f64,
    /// Optimal adaptive POVM on the Berry-Wiseman state.
    pub bw_povm: f64,
}

pub fn benchmark_limits(n: u32) -> Result<BenchmarkLimits> {
    if n == 0 {
        return Err(Error::domain("photon number must be positive"));
    }
    let nf = f64::from(n);
    Ok(BenchmarkLimits {
        n,
        shot_noise: 1.0 / nf.sqrt(),
        heisenberg: 1.0 / nf,
        // tan(pi/4) rounds to 1 - 2^-53 in floating point
        bw_povm: if n == 2 { 1.0 } else { (PI / (nf + 2.0)).tan() },
    })
}

fn check_normalized(state: &TwoModeState) -> Result<()> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::domain(format!("state `{}` is not normalized (norm^2 = {norm})", state.label())));
    }
    Ok(())
}

/// `(expectation, d expectation / d phi)` as complex sums, before the
/// residue check.
fn expectation_sums(state: &TwoModeState, phi: f64, with_derivative: bool) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut slope = Complex64::new(0.0, 0.0);
    match state.frame() {
        Frame::AtInput => {
            // sum over mu', mu of (-1)^{j-mu'} psi*_{mu'} psi_mu d_{mu' mu}(2 phi)
            let rot = RotationAt::new(2.0 * phi);
            for (&two_j, block) in state.components() {
                let j = HalfInt::from_twice(two_j as i32);
                let tj = two_j as i32;
                let nonzero: Vec<(HalfInt, Complex64)> = block
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm_sqr() > 0.0)
                    .map(|(i, &a)| (wigner::projection_at(j, i), a))
                    .collect();
                for &(mu_p, a_p) in &nonzero {
                    let weight = a_p.conj() * parity_sign(j, mu_p);
                    for &(mu, a) in &nonzero {
                        let w = weight * a;
                        value += w * rot.element(tj, mu_p.twice(), mu.twice());
                        if with_derivative {
                            slope += w * 2.0 * rot.derivative(tj, mu_p.twice(), mu.twice());
                        }
                    }
                }
            }
        }
        Frame::InsideInterferometer => {
            // <Q> on the phase-shifted state s_nu = e^{-i nu phi} psi_nu
            for (&two_j, block) in state.components() {
                let j = HalfInt::from_twice(two_j as i32);
                let prefactor = i_pow(i64::from(two_j));
                let dim = block.len();
                for (i, &a_p) in block.iter().enumerate() {
                    let partner = block[dim - 1 - i];
                    if a_p.norm_sqr() == 0.0 || partner.norm_sqr() == 0.0 {
                        continue;
                    }
                    let nu_p = wigner::projection_at(j, i);
                    let term = prefactor
                        * parity_sign(j, nu_p)
                        * a_p.conj()
                        * partner
                        * Complex64::from_polar(1.0, 2.0 * nu_p.value() * phi);
                    value += term;
                    if with_derivative {
                        slope += term * Complex64::new(0.0, 2.0 * nu_p.value());
                    }
                }
            }
        }
    }
    (value, slope)
}

fn real_or_internal(z: Complex64, what: &str) -> Result<f64> {
    if z.im.abs() >= RESIDUE_TOLERANCE {
        return Err(Error::Internal(format!("{what} has imaginary residue {:e}", z.im)));
    }
    Ok(z.re)
}

/// Complex-valued parity expectation, exposing the imaginary residue.
pub fn parity_expectation_complex(state: &TwoModeState, phi: f64) -> Result<Complex64> {
    check_normalized(state)?;
    Ok(expectation_sums(state, phi, false).0)
}

/// `<P>` after the interferometer at phase `phi`. Input-port states use the
/// Wigner-d sum over `d(2 phi)`; internal states are phase-shifted and
/// measured with the parity operator transformed through the output beam
/// splitter.
pub fn parity_expectation(state: &TwoModeState, phi: f64) -> Result<f64> {
    real_or_internal(parity_expectation_complex(state, phi)?, "parity expectation")
}

/// `d <P> / d phi`, from the same sum with derivative Wigner elements.
pub fn parity_derivative(state: &TwoModeState, phi: f64) -> Result<f64> {
    check_normalized(state)?;
    real_or_internal(expectation_sums(state, phi, true).1, "parity derivative")
}

/// The state at the output ports.
pub fn output_state(state: &TwoModeState, phi: f64) -> Result<TwoModeState> {
    match state.frame() {
        Frame::AtInput => interferometer::apply_mzi(state, phi),
        Frame::InsideInterferometer => {
            let shifted = interferometer::apply_phase_shifter(state, phi)?;
            interferometer::apply_beam_splitter(&shifted, true)
        }
    }
}

/// Probabilities of even and odd photon number in output mode b.
pub fn parity_probabilities(state: &TwoModeState, phi: f64) -> Result<(f64, f64)> {
    check_normalized(state)?;
    let out = output_state(state, phi)?;
    let (mut even, mut odd) = (0.0, 0.0);
    for term in out.fock_terms() {
        if term.n_b % 2 == 0 {
            even += term.amplitude.norm_sqr();
        } else {
            odd += term.amplitude.norm_sqr();
        }
    }
    let total = even + odd;
    Ok((even / total, odd / total))
}

/// `sqrt(1 - <P>^2)`, evaluated as `2 sqrt(p_even p_odd)` so that it stays
/// accurate when `<P>` is close to +-1.
pub fn variance(state: &TwoModeState, phi: f64) -> Result<f64> {
    let (even, odd) = parity_probabilities(state, phi)?;
    Ok(2.0 * (even * odd).sqrt())
}

/// `delta phi = Delta P / |d<P>/d phi|` at one phase.
pub fn phase_uncertainty(state: &TwoModeState, phi: f64) -> Result<DetectionResult> {
    let expectation = parity_expectation(state, phi)?;
    let derivative = parity_derivative(state, phi)?;
    let variance = variance(state, phi)?;
    let delta_phi = if derivative.abs() < DERIVATIVE_FLOOR { f64::INFINITY } else { variance / derivative.abs() };
    Ok(DetectionResult { phi, expectation, derivative, variance, delta_phi })
}

/// Number of halvings of the sampling phase used by
/// [`phase_uncertainty_limit`].
pub const LIMIT_LEVELS: usize = 7;

/// Sampling phases `1e-2 / (2^k (2 j_max + 1))`, k = 0..6.
pub fn limit_sample_phases(state: &TwoModeState) -> Vec<f64> {
    let base = 1e-2 / (f64::from(state.max_two_j()) + 1.0);
    (0..LIMIT_LEVELS).map(|k| base / f64::powi(2.0, k as i32)).collect()
}

/// `lim_{phi -> 0} delta phi`.
///
/// `delta phi` is sampled at `+-phi_k`, symmetrized (which removes odd
/// powers of `phi`) and extrapolated with a Richardson table in `phi^2`.
/// Returns `+inf` when the samples are infinite or grow without bound.
pub fn phase_uncertainty_limit(state: &TwoModeState) -> Result<f64> {
    let phases = limit_sample_phases(state);
    let mut samples = Vec::with_capacity(phases.len());
    for &h in &phases {
        let plus = phase_uncertainty(state, h)?.delta_phi;
        let minus = phase_uncertainty(state, -h)?.delta_phi;
        samples.push(0.5 * (plus + minus));
    }
    if samples.iter().any(|s| s.is_infinite()) {
        return Ok(f64::INFINITY);
    }
    if samples.iter().any(|s| s.is_nan()) {
        return Err(Error::NumericalLimit(format!("undefined samples {samples:?}")));
    }
    if samples.windows(2).all(|w| w[1] > 1.5 * w[0]) {
        return Ok(f64::INFINITY);
    }

    let mut table = vec![samples.clone()];
    for m in 1..samples.len() {
        let prev = &table[m - 1];
        let factor = f64::powi(4.0, m as i32) - 1.0;
        let next: Vec<f64> = (1..prev.len()).map(|k| prev[k] + (prev[k] - prev[k - 1]) / factor).collect();
        table.push(next);
    }
    let best = table[samples.len() - 1][0];
    let runner_up = table[samples.len() - 2][1];
    let error = (best - runner_up).abs();
    if !best.is_finite() || error > 1e-6 * best.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalLimit(format!(
            "Richardson estimate {best} has error {error:e}; samples at phi = {phases:?}: {samples:?}"
        )));
    }
    Ok(best)
}

/// A closed-form expectation, with the imaginary part that literal `i^N`
/// factors can leave behind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    pub imaginary_residue: f64,
}

impl From<Complex64> for ClosedForm {
    fn from(z: Complex64) -> Self {
        ClosedForm { value: z.re, imaginary_residue: z.im }
    }
}

/// `(-1)^j` for possibly half-integer `j`, read as `i^{2j}`.
fn minus_one_pow(j: HalfInt) -> Complex64 {
    i_pow(i64::from(j.twice()))
}

fn d(j: HalfInt, mu_p: HalfInt, mu: HalfInt, theta: f64) -> Result<f64> {
    wigner::d_element(j, mu_p, mu, theta)
}

/// The expectation formulas quoted for each family, evaluated as written.
///
/// `n` is the total photon number (the mean photon number for `coherent`).
/// `combined` takes its parameters from `params`. The engine
/// ([`parity_expectation`]) is authoritative; these are cross-checks.
pub fn closed_form_expectation(
    label: &str,
    n: u32,
    phi: f64,
    params: Option<CombinedStateParams>,
) -> Result<ClosedForm> {
    if n == 0 {
        return Err(Error::domain("photon number must be positive"));
    }
    let family = StateFamily::from_label(label, params)?;
    if !family.accepts(n) {
        return Err(Error::domain(format!("N = {n} is outside the parity class of `{label}`")));
    }
    let j = HalfInt::spin_of(n);
    let nf = f64::from(n);
    let zero = HalfInt::ZERO;
    let one = HalfInt::ONE;
    let half = HalfInt::HALF;
    let two_phi = 2.0 * phi;
    let real = |x: f64| Complex64::new(x, 0.0);
    let value = match family {
        StateFamily::Coherent => real((-nf + nf * (1.0 + two_phi.cos()).sqrt() / 2f64.sqrt()).exp()),
        StateFamily::SingleFock => real(((1.0 + two_phi.cos()) / 2.0).powf(j.value())),
        StateFamily::DualFock => minus_one_pow(j) * d(j, zero, zero, two_phi)?,
        StateFamily::Yurke => {
            minus_one_pow(j)
                * 0.5
                * (d(j, zero, zero, two_phi)? - d(j, one, one, two_phi)? + 2.0 * d(j, zero, one, two_phi)?)
        }
        StateFamily::Yuen => real(0.0),
        StateFamily::ModifiedYuen => Complex64::i() * minus_one_pow(j) * d(j, half, -half, two_phi)?,
        StateFamily::PezzeSmerzi => -minus_one_pow(j) * (d(j, one, one, two_phi)? + d(j, -one, one, two_phi)?),
        StateFamily::Noon | StateFamily::NoonInternal => {
            if n % 2 == 0 {
                i_pow(i64::from(n)) * (nf * phi).cos()
            } else {
                i_pow(i64::from(n) + 1) * (nf * phi).sin()
            }
        }
        StateFamily::BerryWiseman => {
            let amps = states::berry_wiseman_amplitudes(n)?;
            let dim = amps.len();
            (0..dim)
                .map(|i| {
                    let nu = wigner::projection_at(j, i);
                    let sign = if nu.twice() % 2 == 0 { 1.0 } else { -1.0 };
                    Complex64::from_polar(sign * amps[dim - 1 - i] * amps[i], 2.0 * nu.value() * phi)
                })
                .sum()
        }
        StateFamily::Combined(p) => {
            let c_sqr = 1.0
                / (1.0
                    + 2.0
                        * 2f64.sqrt()
                        * p.alpha_mag
                        * p.beta_mag
                        * d(j, j, zero, std::f64::consts::FRAC_PI_2)?
                        * (p.theta - nf * PI / 4.0).cos());
            let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
            let noon = minus_one_pow(j)
                * (Complex64::from_polar(1.0, nf * phi) + sign_n * Complex64::from_polar(1.0, -nf * phi))
                / 2.0;
            let dual = minus_one_pow(j) * d(j, zero, zero, two_phi)?;
            let cross = i_pow(i64::from(j.twice() / 2))
                * 2.0
                * 2f64.sqrt()
                * p.alpha_mag
                * p.beta_mag
                * d(j, zero, zero, two_phi)?
                * (nf * phi).cos()
                * p.theta.cos();
            (noon * p.alpha_mag.powi(2) + dual * p.beta_mag.powi(2) + cross) * c_sqr
        }
    };
    Ok(value.into())
}

/// Closed-form `lim_{phi->0} delta phi` where one is quoted; `None` for
/// families characterized only as sub-shot-noise curves.
pub fn closed_form_limit(label: &str, n: u32) -> Option<f64> {
    let nf = f64::from(n);
    let j = nf / 2.0;
    match label {
        "coherent" | "single-fock" => Some(1.0 / nf.sqrt()),
        "dual-fock" => Some(2f64.sqrt() / (nf * (nf + 2.0)).sqrt()),
        "yurke" => Some(1.0 / (j * (j + 1.0)).sqrt()),
        "noon" | "noon-internal" => Some(1.0 / nf),
        "yuen" => Some(f64::INFINITY),
        _ => None,
    }
}
