//! Dense complex linear algebra: states, Hermitian operators, su(d)
//! generators and exact evolution through eigendecomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Algebraic identities (Hermiticity, unit norm) are checked at this level.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A normalized pure state on `num_qubits` qubits.
///
/// Every constructor renormalizes, so the Euclidean norm of the stored
/// amplitudes is 1 up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    num_qubits: usize,
}

impl StateVector {
    /// Normalizes `amplitudes`; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::normalized(CVector::from_vec(amplitudes))
    }

    pub(crate) fn normalized(amplitudes: CVector) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            num_qubits: dim.trailing_zeros() as usize,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                index,
                reason: format!("dimension {dim}"),
            });
        }
        let mut amps = CVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes: amps,
            num_qubits,
        })
    }

    /// Basis state from a bit string such as `"01"`; the first character is
    /// the most significant qubit.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidParameter("empty bit string".into()));
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "bit string contains {other:?}"
                    )))
                }
            }
        }
        Self::basis(bits.len(), index)
    }

    /// `|+⟩^{⊗N}`.
    pub fn plus(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Self {
            amplitudes: CVector::from_element(dim, amp),
            num_qubits,
        }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Multiplies by a global phase `e^{iφ}`.
    pub fn with_phase(&self, phase: f64) -> Self {
        Self {
            amplitudes: self
                .amplitudes
                .map(|a| a * Complex64::from_polar(1.0, phase)),
            num_qubits: self.num_qubits,
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_complex(self.amplitudes.as_slice(), serializer)
    }
}

/// Writes complex numbers as `[re, im]` pairs.
pub fn serialize_complex<S: Serializer>(
    values: &[Complex64],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for a in values {
        seq.serialize_element(&[a.re, a.im])?;
    }
    seq.end()
}

/// A Hermitian matrix, typically a Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = max_abs_entry(&(&matrix - matrix.adjoint()));
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, state: &StateVector) -> Result<CVector> {
        check_dim(self.dim(), state.dim())?;
        Ok(&self.matrix * state.amplitudes())
    }
}

/// An element of su(d): anti-Hermitian and traceless.
///
/// Houses the Riemannian gradient `[H, |φ⟩⟨φ|]` and its stochastic
/// single-direction projections.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentGenerator {
    matrix: CMatrix,
}

impl TangentGenerator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = max_abs_entry(&(&matrix + matrix.adjoint()));
        if deviation > ALGEBRAIC_TOL {
            return Err(Error::NotAntiHermitian { deviation });
        }
        let trace = matrix.trace().norm();
        if trace > ALGEBRAIC_TOL {
            return Err(Error::NotTraceless { trace });
        }
        Ok(Self { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Hilbert–Schmidt norm `sqrt(Tr{M†M})`.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// The Hermitian matrix `i·M`.
    pub fn to_hermitian(&self) -> HermitianOperator {
        let mut m = self.matrix.map(|z| I * z);
        // i·M is Hermitian up to rounding; symmetrize so the eigensolver sees
        // an exactly Hermitian input.
        let adj = m.adjoint();
        m += adj;
        m.unscale_mut(2.0);
        HermitianOperator { matrix: m }
    }
}

/// Spectrum of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigendecomposition {
    pub eigenvalues: Vec<f64>,
    /// Columns are the eigenvectors, in eigenvalue order.
    pub eigenvectors: CMatrix,
}

impl Eigendecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> CMatrix {
        let scaled = self.column_scaled(|l| Complex64::new(l, 0.0));
        scaled * self.eigenvectors.adjoint()
    }

    /// Applies `f(H) = V diag(f(λ)) V†` to `vector`.
    pub fn apply_function<F>(&self, f: F, vector: &CVector) -> CVector
    where
        F: Fn(f64) -> Complex64,
    {
        let mut coeffs = self.eigenvectors.adjoint() * vector;
        for (c, &l) in coeffs.iter_mut().zip(&self.eigenvalues) {
            *c *= f(l);
        }
        &self.eigenvectors * coeffs
    }

    fn column_scaled<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let mut v = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let s = f(l);
            v.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        v
    }
}

pub fn eigendecompose(op: &HermitianOperator) -> Eigendecomposition {
    let eig = SymmetricEigen::new(op.matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    Eigendecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// `e^{s·gen}|state⟩`, computed from the spectrum of the Hermitian `i·gen`:
/// `e^{s·gen} = e^{-i s (i·gen)}`.
pub fn evolve_by_generator(
    state: &StateVector,
    generator: &TangentGenerator,
    s: f64,
) -> Result<StateVector> {
    check_dim(generator.dim(), state.dim())?;
    if s == 0.0 || max_abs_entry(generator.matrix()) == 0.0 {
        return Ok(state.clone());
    }
    let eig = eigendecompose(&generator.to_hermitian());
    let evolved = eig.apply_function(|l| Complex64::from_polar(1.0, -s * l), state.amplitudes());
    StateVector::normalized(evolved)
}

/// `⟨a, b⟩ = Tr{a† b}`.
pub fn hilbert_schmidt_inner(a: &CMatrix, b: &CMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows() * a.ncols(),
            found: b.nrows() * b.ncols(),
        });
    }
    Ok(a.iter()
        .zip(b.iter())
        .fold(ZERO, |acc, (x, y)| acc + x.conj() * y))
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(op: &HermitianOperator) -> f64 {
    spectral_norm_of(&eigendecompose(op))
}

pub(crate) fn spectral_norm_of(eig: &Eigendecomposition) -> f64 {
    eig.eigenvalues.iter().fold(0.0_f64, |m, l| m.max(l.abs()))
}

pub(crate) fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}
