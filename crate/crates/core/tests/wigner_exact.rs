//! Production Wigner elements against the factorial-sum formula evaluated in
//! exact integer arithmetic.
//!
//! The angles are chosen so that `cos(theta/2) = p/h` and `sin(theta/2) = q/h`
//! are rational (Pythagorean triples). Writing the factorial sum with
//! binomial coefficients,
//!
//! `d^j_{m',m} = sqrt[(j+m')!(j-m')! / ((j+m)!(j-m)!)] * S / h^{2j}`,
//! `S = sum_k (-1)^{k+m'-m} C(j+m, k) C(j-m, j-m'-k) p^{2j+m-m'-2k} q^{2k+m'-m}`,
//!
//! so `S` is an exact integer and only the final quotient is rounded.

use mzi_parity::wigner::{d_derivative, d_element};
use mzi_parity::HalfInt;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

const MAX_TWO_J: i64 = 40;

struct Exact {
    factorials: Vec<BigInt>,
    p_pows: Vec<BigInt>,
    q_pows: Vec<BigInt>,
    h_pows: Vec<BigInt>,
}

impl Exact {
    fn new(p: i64, q: i64, h: i64) -> Self {
        let powers = |base: i64| {
            let mut out = vec![BigInt::one()];
            for _ in 0..MAX_TWO_J {
                let next = out.last().unwrap() * base;
                out.push(next);
            }
            out
        };
        let mut factorials = vec![BigInt::one()];
        for k in 1..=MAX_TWO_J {
            let next = factorials.last().unwrap() * k;
            factorials.push(next);
        }
        Exact { factorials, p_pows: powers(p), q_pows: powers(q), h_pows: powers(h) }
    }

    fn binomial(&self, n: i64, k: i64) -> BigInt {
        if k < 0 || k > n {
            return BigInt::zero();
        }
        &self.factorials[n as usize] / (&self.factorials[k as usize] * &self.factorials[(n - k) as usize])
    }

    fn element(&self, two_j: i64, two_mp: i64, two_m: i64) -> f64 {
        let (jpm, jmm) = ((two_j + two_m) / 2, (two_j - two_m) / 2);
        let (jpmp, jmmp) = ((two_j + two_mp) / 2, (two_j - two_mp) / 2);
        let delta = (two_mp - two_m) / 2;
        let mut sum = BigInt::zero();
        for k in 0.max(-delta)..=jpm.min(jmmp) {
            let term = self.binomial(jpm, k)
                * self.binomial(jmm, jmmp - k)
                * &self.p_pows[(two_j - delta - 2 * k) as usize]
                * &self.q_pows[(2 * k + delta) as usize];
            if (k + delta).rem_euclid(2) == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        if sum.is_zero() {
            return 0.0;
        }
        let f = |n: i64| self.factorials[n as usize].clone();
        let ratio = BigRational::new(f(jpmp) * f(jmmp), f(jpm) * f(jmm));
        let scaled = BigRational::new(sum, self.h_pows[two_j as usize].clone());
        scaled.to_f64().unwrap() * ratio.to_f64().unwrap().sqrt()
    }
}

/// (cos(theta/2), sin(theta/2)) numerators over a common hypotenuse.
const HALF_ANGLES: [(i64, i64, i64); 8] =
    [(3, 4, 5), (4, 3, 5), (5, 12, 13), (15, 8, 17), (20, -21, 29), (-7, 24, 25), (0, 1, 1), (1, 0, 1)];

#[test]
fn factorial_sum_matches_production_up_to_2j_40() {
    let mut worst = 0.0f64;
    for &(p, q, h) in &HALF_ANGLES {
        let exact = Exact::new(p, q, h);
        let theta = 2.0 * (q as f64).atan2(p as f64);
        for two_j in 0..=MAX_TWO_J {
            let j = HalfInt::from_twice(two_j as i32);
            for two_mp in (-two_j..=two_j).step_by(2) {
                for two_m in (-two_j..=two_j).step_by(2) {
                    let want = exact.element(two_j, two_mp, two_m);
                    let got =
                        d_element(j, HalfInt::from_twice(two_mp as i32), HalfInt::from_twice(two_m as i32), theta)
                            .unwrap();
                    // theta itself is rounded to double precision; that moves
                    // an element by at most |d'| * ulp(theta) <= j * 2.2e-16 * |theta|
                    let tol = 1e-10 * want.abs() + 4e-16 * (two_j as f64 + 2.0) * theta.abs().max(1.0);
                    assert!(
                        (got - want).abs() <= tol,
                        "2j={two_j} 2m'={two_mp} 2m={two_m} theta={theta}: {got} vs exact {want}"
                    );
                    if want.abs() > 1e-12 {
                        worst = worst.max(((got - want) / want).abs());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-10, "worst relative error {worst:e}");
}

fn richardson_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let central = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * central(h / 2.0) - central(h)) / 3.0
}

#[test]
fn derivative_matches_finite_differences() {
    for two_j in [1, 2, 5, 8, 13, 20, 31, 40, 64] {
        let j = HalfInt::from_twice(two_j);
        for theta in [0.0, 0.1, 0.7, std::f64::consts::FRAC_PI_2, 2.3, 2.9, -1.2] {
            for mp in j.projections() {
                for m in j.projections() {
                    let analytic = d_derivative(j, mp, m, theta).unwrap();
                    let numeric = richardson_difference(|t| d_element(j, mp, m, t).unwrap(), theta, 1e-5);
                    // finite differences carry ~1e-11 rounding noise, so an
                    // absolute floor applies where the slope itself vanishes
                    let tol = 1e-6 * analytic.abs() + 1e-9;
                    assert!(
                        (analytic - numeric).abs() <= tol,
                        "2j={two_j} m'={mp} m={m} theta={theta}: {analytic} vs {numeric}"
                    );
                }
            }
        }
    }
}

#[test]
fn oracle_self_check() {
    let exact = Exact::new(3, 4, 5);
    assert_eq!(exact.element(1, 1, -1), -0.8);
    assert_eq!(exact.element(1, -1, 1), 0.8);
    // d^1_{00} = cos theta = c^2 - s^2
    assert!((exact.element(2, 0, 0) - (9.0 - 16.0) / 25.0).abs() < 1e-16);
}
