//! Beam splitter, phase shifter and full Mach-Zehnder transformations, and
//! the parity operators.
//!
//! With the 50/50 beam splitter `B = exp(-i pi/2 J_x)` the interferometer
//! factorizes exactly as `exp(-i phi J_y) = B^dagger exp(-i phi J_z) B`:
//! `apply_beam_splitter(_, false)`, then [`apply_phase_shifter`], then
//! `apply_beam_splitter(_, true)` is the same map as [`apply_mzi`].

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::states::{Frame, TwoModeState};
use crate::wigner::{self, RotationAt};

fn require_frame(state: &TwoModeState, expected: Frame) -> Result<()> {
    if state.frame() == expected {
        Ok(())
    } else {
        Err(Error::Frame { expected, found: state.frame() })
    }
}

/// `out_nu = sum_mu d^j_{nu,mu}(theta) psi_mu` for one block, skipping zero
/// amplitudes.
pub(crate) fn rotate_block(two_j: u32, block: &[Complex64], rot: &RotationAt) -> Vec<Complex64> {
    let tj = two_j as i32;
    let nonzero: Vec<(i32, Complex64)> = block
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .map(|(col, &a)| (tj - 2 * col as i32, a))
        .collect();
    (0..block.len())
        .map(|row| {
            let two_nu = tj - 2 * row as i32;
            nonzero.iter().map(|&(two_mu, a)| a * rot.element(tj, two_nu, two_mu)).sum()
        })
        .collect()
}

/// Apply `exp(-i phi J_y)` to an input-port state. Each block is rotated by
/// the Wigner block at angle `phi`.
pub fn apply_mzi(state: &TwoModeState, phi: f64) -> Result<TwoModeState> {
    require_frame(state, Frame::AtInput)?;
    let rot = RotationAt::new(phi);
    Ok(state.map_blocks(Frame::AtInput, |two_j, block| rotate_block(two_j, block, &rot)))
}

/// Apply `exp(-i pi/2 J_x)` (`inverse = false`) or `exp(+i pi/2 J_x)`
/// (`inverse = true`) through `exp(i pi/2 J_z) exp(-/+ i pi/2 J_y) exp(-i pi/2 J_z)`.
/// The frame tag is toggled.
pub fn apply_beam_splitter(state: &TwoModeState, inverse: bool) -> Result<TwoModeState> {
    let theta = if inverse { -FRAC_PI_2 } else { FRAC_PI_2 };
    let rot = RotationAt::new(theta);
    Ok(state.map_blocks(state.frame().toggled(), |two_j, block| {
        let tj = two_j as i32;
        // diagonal phase e^{-i pi mu/2}, then rotation, then e^{+i pi nu/2}
        let phased: Vec<Complex64> =
            block.iter().enumerate().map(|(i, &a)| a * quarter_turn(-(tj - 2 * i as i32))).collect();
        let mut out = rotate_block(two_j, &phased, &rot);
        for (i, a) in out.iter_mut().enumerate() {
            *a *= quarter_turn(tj - 2 * i as i32);
        }
        out
    }))
}

/// `e^{i pi mu / 2}` for `two_mu = 2 mu`, i.e. `e^{i pi two_mu / 4}`.
fn quarter_turn(two_mu: i32) -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_2 * f64::from(two_mu) / 2.0)
}

/// Multiply each amplitude by `e^{-i mu phi}`; only valid between the beam
/// splitters.
pub fn apply_phase_shifter(state: &TwoModeState, phi: f64) -> Result<TwoModeState> {
    require_frame(state, Frame::InsideInterferometer)?;
    Ok(state.map_blocks(Frame::InsideInterferometer, |two_j, block| {
        let j = HalfInt::from_twice(two_j as i32);
        block
            .iter()
            .enumerate()
            .map(|(i, &a)| a * Complex64::from_polar(1.0, -wigner::projection_at(j, i).value() * phi))
            .collect()
    }))
}

/// `i^n` exactly.
pub(crate) fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Photon-number form of `Q`: `i^N (-1)^k` when `k' = N - k`, else zero,
/// with `k` labelling `|k, N-k>` and `k'` labelling `<N-k, k|`.
pub fn q_matrix_element(n: u32, k: u32, k_p: u32) -> Result<Complex64> {
    if n == 0 || k > n || k_p > n {
        return Err(Error::domain(format!("Q element (k = {k}, k' = {k_p}) out of range for N = {n}")));
    }
    if k_p != n - k {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(i_pow(i64::from(n)) * sign)
}

/// `<j, nu'| B P B^dagger |j, nu>` with `B = exp(-i pi/2 J_x)`, the parity
/// operator carried back through the output beam splitter:
/// `i^{2j} (-1)^{j - nu'} delta_{nu', -nu}`.
///
/// For even N this coincides with [`q_matrix_element`]; for odd N the two
/// differ by an overall sign.
pub fn q_operator_element(j: HalfInt, nu_p: HalfInt, nu: HalfInt) -> Result<Complex64> {
    if !j.admits(nu_p) {
        return Err(Error::InvalidIndex { name: "nu'", value: nu_p, j });
    }
    if !j.admits(nu) {
        return Err(Error::InvalidIndex { name: "nu", value: nu, j });
    }
    if nu_p != -nu {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(i_pow(i64::from(j.twice())) * parity_sign(j, nu_p))
}

/// `(-1)^{j - mu}`.
pub(crate) fn parity_sign(j: HalfInt, mu: HalfInt) -> f64 {
    if ((j - mu).twice() / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
