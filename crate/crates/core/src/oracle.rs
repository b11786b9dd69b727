//! Brute-force reference built from mode operators on a fixed-photon-number
//! Fock space. Nothing here uses the Wigner-d machinery: generators come from
//! ladder-operator matrix elements and are exponentiated densely.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{Frame, TwoModeState};

/// Largest total photon number the oracle accepts.
pub const MAX_PHOTONS: u32 = 12;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Two-mode Fock states `|n_a, n_b>` with `n_a + n_b = n_total`, ordered by
/// `n_b` ascending (so `n_a` descending).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    n_total: u32,
}

impl FockBasis {
    pub fn new(n_total: u32) -> Result<Self> {
        if n_total > MAX_PHOTONS {
            return Err(Error::domain(format!("oracle supports at most {MAX_PHOTONS} photons, got {n_total}")));
        }
        Ok(FockBasis { n_total })
    }

    pub fn n_total(&self) -> u32 {
        self.n_total
    }

    pub fn dimension(&self) -> usize {
        self.n_total as usize + 1
    }

    /// `(n_a, n_b)` at position `idx`.
    pub fn label(&self, idx: usize) -> (u32, u32) {
        (self.n_total - idx as u32, idx as u32)
    }

    pub fn index(&self, n_a: u32, n_b: u32) -> Option<usize> {
        (n_a + n_b == self.n_total).then_some(n_b as usize)
    }
}

/// A named operator on a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub matrix: CMatrix,
    pub label: String,
}

impl DenseOperator {
    fn new(matrix: CMatrix, label: &str) -> Self {
        DenseOperator { matrix, label: label.to_owned() }
    }

    /// Largest element of `|A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }
}

/// `max |m_ij|`.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The Schwinger generators and output-port parity.
#[derive(Debug, Clone)]
pub struct Generators {
    pub basis: FockBasis,
    pub jx: DenseOperator,
    pub jy: DenseOperator,
    pub jz: DenseOperator,
    pub parity: DenseOperator,
}

/// Matrix of `a^dagger b` restricted to fixed total photon number.
fn raise_a_lower_b(basis: &FockBasis) -> CMatrix {
    let dim = basis.dimension();
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (n_a, n_b) = basis.label(col);
        if n_b == 0 {
            continue;
        }
        let row = basis.index(n_a + 1, n_b - 1).expect("photon number conserved");
        // a^dagger |n_a> = sqrt(n_a + 1) |n_a + 1>, b |n_b> = sqrt(n_b) |n_b - 1>
        m[(row, col)] = Complex64::new((f64::from(n_a + 1) * f64::from(n_b)).sqrt(), 0.0);
    }
    m
}

pub fn build_generators(n_total: u32) -> Result<Generators> {
    let basis = FockBasis::new(n_total)?;
    let dim = basis.dimension();
    let ab = raise_a_lower_b(&basis);
    let ba = ab.adjoint();
    let jx = (&ab + &ba).map(|z| z * 0.5);
    let jy = (&ab - &ba).map(|z| z / Complex64::new(0.0, 2.0));
    let mut jz = CMatrix::zeros(dim, dim);
    let mut parity = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let (n_a, n_b) = basis.label(idx);
        jz[(idx, idx)] = Complex64::new((f64::from(n_a) - f64::from(n_b)) / 2.0, 0.0);
        parity[(idx, idx)] = Complex64::new(if n_b % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(Generators {
        basis,
        jx: DenseOperator::new(jx, "J_x"),
        jy: DenseOperator::new(jy, "J_y"),
        jz: DenseOperator::new(jz, "J_z"),
        parity: DenseOperator::new(parity, "P"),
    })
}

/// `exp(-i angle G)` for Hermitian `G`, by eigendecomposition.
pub fn unitary(generator: &DenseOperator, angle: f64) -> CMatrix {
    let eig = SymmetricEigen::new(generator.matrix.clone());
    let phases = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -angle * l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// `exp(-i angle G) v`.
pub fn evolve(state_vector: &CVector, generator: &DenseOperator, angle: f64) -> Result<CVector> {
    if generator.matrix.nrows() != state_vector.len() {
        return Err(Error::domain(format!(
            "vector of length {} does not match {} of dimension {}",
            state_vector.len(),
            generator.label,
            generator.matrix.nrows()
        )));
    }
    Ok(unitary(generator, angle) * state_vector)
}

/// `B P B^dagger` with `B = exp(-i pi/2 J_x)`.
pub fn q_operator(generators: &Generators) -> DenseOperator {
    let b = unitary(&generators.jx, std::f64::consts::FRAC_PI_2);
    let q = &b * &generators.parity.matrix * b.adjoint();
    DenseOperator::new(q, "Q")
}

/// Fock-basis vector for the photon-number-`n_total` part of a state.
pub fn to_fock_vector(state: &TwoModeState, n_total: u32) -> Result<CVector> {
    let basis = FockBasis::new(n_total)?;
    let mut v = CVector::zeros(basis.dimension());
    for term in state.fock_terms() {
        if let Some(idx) = basis.index(term.n_a, term.n_b) {
            v[idx] = term.amplitude;
        }
    }
    Ok(v)
}

fn expectation(v: &CVector, op: &CMatrix) -> Complex64 {
    v.dotc(&(op * v))
}

/// Unnormalized contribution of one photon-number block to `<P>` (or `<Q>`
/// for internal states).
pub fn bruteforce_block_expectation(state: &TwoModeState, n_total: u32, phi: f64) -> Result<Complex64> {
    let g = build_generators(n_total)?;
    let v = to_fock_vector(state, n_total)?;
    Ok(match state.frame() {
        Frame::AtInput => {
            let out = evolve(&v, &g.jy, phi)?;
            expectation(&out, &g.parity.matrix)
        }
        Frame::InsideInterferometer => {
            let shifted = evolve(&v, &g.jz, phi)?;
            expectation(&shifted, &q_operator(&g).matrix)
        }
    })
}

/// Parity expectation computed by dense evolution; every block of the
/// state must have at most [`MAX_PHOTONS`] photons.
pub fn bruteforce_parity_expectation(state: &TwoModeState, phi: f64) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    for &n in state.components().keys() {
        total += bruteforce_block_expectation(state, n, phi)?;
    }
    if total.im.abs() >= 1e-12 {
        return Err(Error::Internal(format!("oracle expectation has imaginary residue {:e}", total.im)));
    }
    Ok(total.re)
}
