//! Real rotation matrix elements `d^j_{mu',mu}(theta) = <j mu'| exp(-i theta J_y) |j mu>`
//! in the J_z eigenbasis, for integer and half-integer j.
//!
//! Elements are evaluated through the Jacobi-polynomial form of Wigner's
//! formula,
//!
//! ```text
//! d^j_{m'm}(θ) = (-1)^λ sqrt[(2j-k)! k! / ((k+a)! (k+b)!)]
//!                · sin(θ/2)^a cos(θ/2)^b · P_k^{(a,b)}(cos θ),
//! ```
//!
//! with `k = min(j+m, j-m, j+m', j-m')`, and the polynomial generated by its
//! three-term recurrence. The recurrence is forward-stable on [-1, 1]; the
//! explicit alternating factorial sum is not (its terms reach ~2^j times the
//! result), so it only appears in the test oracles.
//!
//! Blocks are ordered with mu descending from +j to -j, so row/column 0 is
//! the state with every photon in mode `a`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

const LOG_FACTORIAL_TABLE_LEN: usize = 1024;

/// Neumaier's variant of compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(self) -> f64 {
        self.sum + self.compensation
    }
}

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut acc = CompensatedSum::default();
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE_LEN + 1);
        table.push(0.0);
        for i in 1..=LOG_FACTORIAL_TABLE_LEN {
            acc.add((i as f64).ln());
            table.push(acc.total());
        }
        table
    })
}

/// `ln(n!)`.
///
/// Tabulated by compensated summation of `ln i` up to 1024, Stirling's
/// series beyond (where its truncation error is far below one ulp).
pub fn log_factorial(n: u64) -> f64 {
    if let Some(&v) = log_factorial_table().get(n as usize) {
        return v;
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (std::f64::consts::TAU * x).ln() + series
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by forward recurrence in the degree.
/// `x_minus_one` is passed separately so that it keeps full relative
/// precision when x is close to 1.
fn jacobi(n: u32, a: f64, b: f64, x: f64, x_minus_one: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = (a + 1.0) + 0.5 * (a + b + 2.0) * x_minus_one;
    for k in 2..=n {
        let k = f64::from(k);
        let c = 2.0 * k + a + b;
        let lead = 2.0 * k * (k + a + b) * (c - 2.0);
        let linear = (c - 1.0) * (a * a - b * b);
        let quad = (c - 2.0) * (c - 1.0) * c;
        let back = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        let next = ((linear + quad * x) * cur - back * prev) / lead;
        prev = cur;
        cur = next;
    }
    cur
}

fn check_index(name: &'static str, j: HalfInt, m: HalfInt) -> Result<()> {
    if j.admits(m) {
        Ok(())
    } else {
        Err(Error::InvalidIndex { name, value: m, j })
    }
}

fn check_spin(j: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        Err(Error::domain(format!("negative spin j = {j}")))
    } else {
        Ok(())
    }
}

/// Precomputed half-angle data shared by all elements at one angle.
#[derive(Debug, Clone, Copy)]
struct Angle {
    sin_half: f64,
    cos_half: f64,
    cos_full: f64,
    cos_full_minus_one: f64,
}

impl Angle {
    fn new(theta: f64) -> Self {
        let (sin_half, cos_half) = (0.5 * theta).sin_cos();
        Angle { sin_half, cos_half, cos_full: theta.cos(), cos_full_minus_one: -2.0 * sin_half * sin_half }
    }
}

/// `sign · |base|^exp` as (sign, ln magnitude); `None` for an exact zero.
fn signed_log_pow(base: f64, exp: i32) -> Option<(f64, f64)> {
    if exp == 0 {
        return Some((1.0, 0.0));
    }
    if base == 0.0 {
        return None;
    }
    let sign = if base < 0.0 && exp % 2 == 1 { -1.0 } else { 1.0 };
    Some((sign, f64::from(exp) * base.abs().ln()))
}

/// Element from doubled indices; the caller has validated them.
fn element_twice(two_j: i32, two_mp: i32, two_m: i32, angle: &Angle) -> f64 {
    let j_plus_m = (two_j + two_m) / 2;
    let j_minus_m = (two_j - two_m) / 2;
    let j_plus_mp = (two_j + two_mp) / 2;
    let j_minus_mp = (two_j - two_mp) / 2;
    let mp_minus_m = (two_mp - two_m) / 2;

    let k = j_plus_m.min(j_minus_m).min(j_plus_mp).min(j_minus_mp);
    let (a, lambda) =
        if k != j_plus_m && (k == j_minus_m || k == j_plus_mp) { (-mp_minus_m, 0) } else { (mp_minus_m, mp_minus_m) };
    let b = two_j - 2 * k - a;
    debug_assert!(a >= 0 && b >= 0 && k >= 0);

    let (Some((s_sign, s_log)), Some((c_sign, c_log))) =
        (signed_log_pow(angle.sin_half, a), signed_log_pow(angle.cos_half, b))
    else {
        return 0.0;
    };

    let (a_u, b_u, k_u) = (a as u64, b as u64, k as u64);
    let two_j_u = two_j as u64;
    let log_norm = 0.5
        * ((log_factorial(two_j_u - k_u) - log_factorial(k_u + b_u)) + (log_factorial(k_u) - log_factorial(k_u + a_u)));

    let poly = jacobi(k as u32, f64::from(a), f64::from(b), angle.cos_full, angle.cos_full_minus_one);
    if poly == 0.0 {
        return 0.0;
    }
    let phase = if lambda.rem_euclid(2) == 1 { -1.0 } else { 1.0 };
    let sign = phase * s_sign * c_sign * poly.signum();
    sign * (log_norm + s_log + c_log + poly.abs().ln()).exp()
}

/// Raising coefficient `sqrt((j - m)(j + m + 1))` from doubled indices.
fn ladder_up(two_j: i32, two_m: i32) -> f64 {
    let prod = f64::from(two_j - two_m) * f64::from(two_j + two_m + 2) / 4.0;
    prod.max(0.0).sqrt()
}

/// Raising coefficient `sqrt((j + m)(j - m + 1))` from doubled indices.
fn ladder_down(two_j: i32, two_m: i32) -> f64 {
    let prod = f64::from(two_j + two_m) * f64::from(two_j - two_m + 2) / 4.0;
    prod.max(0.0).sqrt()
}

/// d/dθ of the element, from `∂_θ d = d · (-i J_y)`:
/// `d'_{m'm} = ½[sqrt((j+m)(j-m+1)) d_{m',m-1} - sqrt((j-m)(j+m+1)) d_{m',m+1}]`.
fn derivative_twice(two_j: i32, two_mp: i32, two_m: i32, angle: &Angle) -> f64 {
    let mut out = 0.0;
    if two_m > -two_j {
        out += ladder_down(two_j, two_m) * element_twice(two_j, two_mp, two_m - 2, angle);
    }
    if two_m < two_j {
        out -= ladder_up(two_j, two_m) * element_twice(two_j, two_mp, two_m + 2, angle);
    }
    0.5 * out
}

/// `d^j_{mu',mu}(theta)`.
pub fn d_element(j: HalfInt, mu_p: HalfInt, mu: HalfInt, theta: f64) -> Result<f64> {
    check_spin(j)?;
    check_index("mu'", j, mu_p)?;
    check_index("mu", j, mu)?;
    Ok(element_twice(j.twice(), mu_p.twice(), mu.twice(), &Angle::new(theta)))
}

/// `∂_θ d^j_{mu',mu}(theta)`, evaluated analytically.
pub fn d_derivative(j: HalfInt, mu_p: HalfInt, mu: HalfInt, theta: f64) -> Result<f64> {
    check_spin(j)?;
    check_index("mu'", j, mu_p)?;
    check_index("mu", j, mu)?;
    Ok(derivative_twice(j.twice(), mu_p.twice(), mu.twice(), &Angle::new(theta)))
}

/// The full `(2j+1) × (2j+1)` rotation block at one angle.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerBlock {
    j: HalfInt,
    theta: f64,
    elements: Vec<f64>,
}

impl WignerBlock {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.j.twice() as usize + 1
    }

    /// Row-major elements, rows indexed by mu' and columns by mu, both
    /// descending.
    pub fn elements(&self) -> &[f64] {
        &self.elements
    }

    /// Element by position (row = index of mu', col = index of mu).
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.elements[row * self.dim() + col]
    }

    pub fn get(&self, mu_p: HalfInt, mu: HalfInt) -> Option<f64> {
        if !self.j.admits(mu_p) || !self.j.admits(mu) {
            return None;
        }
        Some(self.at(index_of(self.j, mu_p), index_of(self.j, mu)))
    }

    /// Rows as vectors, convenient for matrix checks.
    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.elements.chunks(self.dim())
    }
}

/// Position of projection `mu` in a descending block of spin `j`.
pub fn index_of(j: HalfInt, mu: HalfInt) -> usize {
    ((j.twice() - mu.twice()) / 2) as usize
}

/// Projection at position `idx` of a descending block of spin `j`.
pub fn projection_at(j: HalfInt, idx: usize) -> HalfInt {
    HalfInt::from_twice(j.twice() - 2 * idx as i32)
}

/// The whole rotation block `D(theta)` for spin `j`.
pub fn d_block(j: HalfInt, theta: f64) -> Result<WignerBlock> {
    check_spin(j)?;
    let two_j = j.twice();
    let dim = two_j as usize + 1;
    let angle = Angle::new(theta);
    let mut elements = vec![0.0; dim * dim];
    for row in 0..dim {
        let two_mp = two_j - 2 * row as i32;
        for col in 0..dim {
            let two_m = two_j - 2 * col as i32;
            elements[row * dim + col] = element_twice(two_j, two_mp, two_m, &angle);
        }
    }
    Ok(WignerBlock { j, theta, elements })
}

/// Block of derivatives `∂_θ D(theta)`.
pub fn d_derivative_block(j: HalfInt, theta: f64) -> Result<WignerBlock> {
    let block = d_block(j, theta)?;
    let two_j = j.twice();
    let dim = block.dim();
    let mut elements = vec![0.0; dim * dim];
    for row in 0..dim {
        for col in 0..dim {
            let two_m = two_j - 2 * col as i32;
            let mut v = 0.0;
            if col + 1 < dim {
                v += ladder_down(two_j, two_m) * block.at(row, col + 1);
            }
            if col > 0 {
                v -= ladder_up(two_j, two_m) * block.at(row, col - 1);
            }
            elements[row * dim + col] = 0.5 * v;
        }
    }
    Ok(WignerBlock { j, theta, elements })
}

/// Crate-internal fast path for callers that already hold validated
/// doubled indices and a fixed angle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RotationAt {
    angle: Angle,
}

impl RotationAt {
    pub(crate) fn new(theta: f64) -> Self {
        RotationAt { angle: Angle::new(theta) }
    }

    pub(crate) fn element(&self, two_j: i32, two_mp: i32, two_m: i32) -> f64 {
        element_twice(two_j, two_mp, two_m, &self.angle)
    }

    pub(crate) fn derivative(&self, two_j: i32, two_mp: i32, two_m: i32) -> f64 {
        derivative_twice(two_j, two_mp, two_m, &self.angle)
    }
}
