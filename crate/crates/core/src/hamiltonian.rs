//! Pauli-string Hamiltonians and the normalized Pauli basis of su(d).
//!
//! Two conventions coexist. Hamiltonian terms use the plain Pauli matrices
//! so coefficients carry physical energy units. The sampling basis uses
//! `P = σ/√d`, which gives `Tr(P_j P_k) = δ_jk` and `P² = 1/d`. The
//! convention travels with every [`PauliString`] and mixing them is an error.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::{
    self, check_dim, CMatrix, CVector, Eigendecomposition, HermitianOperator, StateVector,
};
use crate::{Error, Result};

/// Dense materialization cap (d = 64, D = 4095).
pub const DEFAULT_MAX_QUBITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [
        PauliLetter::I,
        PauliLetter::X,
        PauliLetter::Y,
        PauliLetter::Z,
    ];

    fn flips(self) -> bool {
        matches!(self, PauliLetter::X | PauliLetter::Y)
    }

    /// Matrix element `⟨row|σ|col⟩` for single-qubit bits, given that `col`
    /// is the only nonzero column of `row`.
    fn element(self, row_bit: bool) -> Complex64 {
        match (self, row_bit) {
            (PauliLetter::I, _) | (PauliLetter::X, _) | (PauliLetter::Z, false) => {
                Complex64::new(1.0, 0.0)
            }
            (PauliLetter::Z, true) => Complex64::new(-1.0, 0.0),
            (PauliLetter::Y, false) => Complex64::new(0.0, -1.0),
            (PauliLetter::Y, true) => Complex64::new(0.0, 1.0),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

impl TryFrom<char> for PauliLetter {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'I' => Ok(PauliLetter::I),
            'X' => Ok(PauliLetter::X),
            'Y' => Ok(PauliLetter::Y),
            'Z' => Ok(PauliLetter::Z),
            other => Err(Error::InvalidParameter(format!(
                "not a Pauli letter: {other:?}"
            ))),
        }
    }
}

/// A tensor product of single-qubit Paulis. The first letter acts on the
/// most significant bit of the basis index, so `"ZI"` is `Z ⊗ I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    normalized: bool,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParameter("empty Pauli string".into()));
        }
        Ok(Self {
            letters,
            normalized: false,
        })
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.letters.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    /// Same letters in the `σ/√d` convention.
    pub fn normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    /// Prefactor applied to the plain tensor product.
    pub fn scale(&self) -> f64 {
        if self.normalized {
            1.0 / (self.dim() as f64).sqrt()
        } else {
            1.0
        }
    }

    /// Bit mask of qubits the string flips (X or Y); row `r` has its single
    /// nonzero entry in column `r ^ flip_mask`.
    pub fn flip_mask(&self) -> usize {
        let n = self.letters.len();
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, l)| l.flips())
            .fold(0, |m, (p, _)| m | 1 << (n - 1 - p))
    }

    /// The nonzero entry of `row`: `(column, value)`, including the
    /// normalization prefactor.
    pub fn row_entry(&self, row: usize) -> (usize, Complex64) {
        let n = self.letters.len();
        let value = self
            .letters
            .iter()
            .enumerate()
            .fold(Complex64::new(self.scale(), 0.0), |acc, (p, l)| {
                acc * l.element((row >> (n - 1 - p)) & 1 == 1)
            });
        (row ^ self.flip_mask(), value)
    }

    pub fn matrix(&self) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for row in 0..d {
            let (col, v) = self.row_entry(row);
            m[(row, col)] = v;
        }
        m
    }

    /// `P|v⟩` without forming the matrix.
    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_dim(self.dim(), v.len())?;
        let mut out = CVector::zeros(v.len());
        for row in 0..v.len() {
            let (col, value) = self.row_entry(row);
            out[row] = value * v[col];
        }
        Ok(out)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(PauliLetter::try_from)
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.letters.iter().map(|l| l.as_char()).collect();
        if self.normalized {
            write!(f, "{s}/sqrt({})", self.dim())
        } else {
            f.write_str(&s)
        }
    }
}

/// `H = Σ c_k σ_k` with the dense form, spectrum and `‖H‖∞` computed at
/// construction.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
    dense: HermitianOperator,
    spectrum: Eigendecomposition,
    spectral_norm: f64,
}

impl HamiltonianSpec {
    pub fn new(num_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        Self::with_max_qubits(num_qubits, terms, DEFAULT_MAX_QUBITS)
    }

    pub fn with_max_qubits(
        num_qubits: usize,
        terms: Vec<(f64, PauliString)>,
        max_qubits: usize,
    ) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter(
                "Hamiltonian needs at least one qubit".into(),
            ));
        }
        if num_qubits > max_qubits {
            return Err(Error::TooManyQubits {
                num_qubits,
                max_qubits,
            });
        }
        for (c, p) in &terms {
            if p.is_normalized() {
                return Err(Error::ConventionMismatch(
                    "Hamiltonian terms use unnormalized Pauli strings",
                ));
            }
            check_dim(num_qubits, p.num_qubits())?;
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient {c}"
                )));
            }
        }
        let dense = HermitianOperator::new(materialize(num_qubits, &terms))?;
        let spectrum = linalg::eigendecompose(&dense);
        let spectral_norm = linalg::spectral_norm_of(&spectrum);
        Ok(Self {
            num_qubits,
            terms,
            dense,
            spectrum,
            spectral_norm,
        })
    }

    /// Parses one `coefficient letters` term per line; `#` starts a comment.
    ///
    /// ```text
    /// # transverse-field pair
    /// 1.0  ZZ
    /// -0.5 XI
    /// ```
    pub fn parse(text: &str, max_qubits: usize) -> Result<Self> {
        let mut terms = Vec::new();
        let mut num_qubits = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: lineno + 1,
                message,
            };
            let mut fields = line.split_whitespace();
            let (Some(coeff), Some(letters), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err(format!("expected `coefficient letters`, got {line:?}")));
            };
            let coeff: f64 = coeff
                .parse()
                .map_err(|e| err(format!("bad coefficient {coeff:?}: {e}")))?;
            if !coeff.is_finite() {
                return Err(err(format!("non-finite coefficient {coeff}")));
            }
            let string: PauliString = letters.parse().map_err(|e: Error| err(e.to_string()))?;
            match num_qubits {
                None => num_qubits = Some(string.num_qubits()),
                Some(n) if n != string.num_qubits() => {
                    return Err(err(format!(
                        "term {letters} acts on {} qubits, earlier terms on {n}",
                        string.num_qubits()
                    )))
                }
                _ => {}
            }
            terms.push((coeff, string));
        }
        let num_qubits = num_qubits.ok_or(Error::Parse {
            line: 0,
            message: "no Hamiltonian terms".into(),
        })?;
        Self::with_max_qubits(num_qubits, terms, max_qubits)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn materialize(&self) -> &HermitianOperator {
        &self.dense
    }

    pub fn spectrum(&self) -> &Eigendecomposition {
        &self.spectrum
    }

    /// `‖H‖∞`.
    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    /// Same text format that [`HamiltonianSpec::parse`] reads.
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|(c, p)| format!("{c:?} {p}\n"))
            .collect()
    }
}

/// `Σ c_k σ_k` as a dense matrix.
pub fn materialize(num_qubits: usize, terms: &[(f64, PauliString)]) -> CMatrix {
    let d = 1usize << num_qubits;
    let mut m = CMatrix::zeros(d, d);
    for (c, p) in terms {
        for row in 0..d {
            let (col, v) = p.row_entry(row);
            m[(row, col)] += v * *c;
        }
    }
    m
}

/// `⟨ψ|H|ψ⟩`.
pub fn expectation(h: &HamiltonianSpec, state: &StateVector) -> Result<f64> {
    let hv = h.materialize().apply(state)?;
    Ok(state.amplitudes().dotc(&hv).re)
}

/// `⟨H²⟩ - ⟨H⟩²`, clamped at zero.
pub fn variance(h: &HamiltonianSpec, state: &StateVector) -> Result<f64> {
    let hv = h.materialize().apply(state)?;
    let mean = state.amplitudes().dotc(&hv).re;
    Ok((hv.norm_squared() - mean * mean).max(0.0))
}

/// The traceless normalized Pauli strings on `N` qubits, in lexicographic
/// letter order (`I < X < Y < Z`, first letter most significant), with an
/// optional restriction to a subset of sample directions.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliBasis {
    num_qubits: usize,
    elements: Vec<PauliString>,
    restriction: Option<Vec<usize>>,
}

impl PauliBasis {
    /// All `4^N - 1` directions.
    pub fn full(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter(
                "basis needs at least one qubit".into(),
            ));
        }
        if num_qubits > DEFAULT_MAX_QUBITS {
            return Err(Error::TooManyQubits {
                num_qubits,
                max_qubits: DEFAULT_MAX_QUBITS,
            });
        }
        let count = 1usize << (2 * num_qubits);
        let elements = (1..count)
            .map(|code| {
                let letters = (0..num_qubits)
                    .map(|p| PauliLetter::ALL[(code >> (2 * (num_qubits - 1 - p))) & 3])
                    .collect();
                PauliString {
                    letters,
                    normalized: true,
                }
            })
            .collect();
        Ok(Self {
            num_qubits,
            elements,
            restriction: None,
        })
    }

    /// Restricts sampling to the given full-basis indices (kept in the
    /// order given).
    pub fn restricted(&self, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidParameter("empty basis restriction".into()));
        }
        let mut seen = vec![false; self.elements.len()];
        for &i in &indices {
            if i >= self.elements.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    reason: format!("full basis has {} elements", self.elements.len()),
                });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate restriction index {i}"
                )));
            }
        }
        Ok(Self {
            restriction: Some(indices),
            ..self.clone()
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Size of the full basis, `d² - 1`.
    pub fn full_size(&self) -> usize {
        self.elements.len()
    }

    /// Number of directions actually sampled (`D_eff`).
    pub fn effective_size(&self) -> usize {
        self.restriction
            .as_ref()
            .map_or(self.elements.len(), Vec::len)
    }

    pub fn restriction(&self) -> Option<&[usize]> {
        self.restriction.as_deref()
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> Option<&PauliString> {
        self.elements.get(index)
    }

    /// Full-basis index of the `position`-th sample direction.
    pub fn index_at(&self, position: usize) -> usize {
        match &self.restriction {
            Some(r) => r[position],
            None => position,
        }
    }

    /// Whether `index` lies in the sample space.
    pub fn contains(&self, index: usize) -> bool {
        match &self.restriction {
            Some(r) => r.contains(&index),
            None => index < self.elements.len(),
        }
    }

    /// Full-basis index of a string, if it is a basis element.
    pub fn position_of(&self, letters: &str) -> Option<usize> {
        let p: PauliString = letters.parse().ok()?;
        self.elements.iter().position(|e| e.letters == p.letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hilbert_schmidt_inner;
    use crate::linalg::tests::{c, pauli_x, pauli_y, pauli_z};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn h(text: &str) -> HamiltonianSpec {
        HamiltonianSpec::parse(text, DEFAULT_MAX_QUBITS).unwrap()
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    // Kronecker oracle, independent of the row_entry construction.
    fn kron_oracle(letters: &str) -> CMatrix {
        letters
            .chars()
            .map(|l| match l {
                'I' => CMatrix::identity(2, 2),
                'X' => pauli_x(),
                'Y' => pauli_y(),
                'Z' => pauli_z(),
                _ => unreachable!(),
            })
            .reduce(|acc, m| acc.kronecker(&m))
            .unwrap()
    }

    #[test]
    fn single_z() {
        let m = h("1.0 Z").materialize().matrix().clone();
        assert_eq!(m, pauli_z());
    }

    #[test]
    fn two_qubit_sum_matches_kronecker() {
        let spec = h("0.5 ZZ\n0.5 XI");
        let oracle = kron_oracle("ZZ").scale(0.5) + kron_oracle("XI").scale(0.5);
        assert!(max_diff(spec.materialize().matrix(), &oracle) < 1e-15);
    }

    #[test]
    fn every_string_matches_kronecker() {
        for n in 1..=3 {
            for p in PauliBasis::full(n).unwrap().elements() {
                let letters: String = p.letters().iter().map(|l| l.as_char()).collect();
                let plain = PauliString::from_str(&letters).unwrap();
                assert!(
                    max_diff(&plain.matrix(), &kron_oracle(&letters)) < 1e-15,
                    "{letters}"
                );
            }
        }
    }

    #[test]
    fn empty_terms_give_zero() {
        let spec = HamiltonianSpec::new(2, vec![]).unwrap();
        assert_eq!(spec.materialize().matrix(), &CMatrix::zeros(4, 4));
        assert_eq!(spec.spectral_norm(), 0.0);
    }

    #[test]
    fn size_cap() {
        let z7: PauliString = "ZZZZZZZ".parse().unwrap();
        assert!(matches!(
            HamiltonianSpec::new(7, vec![(1.0, z7)]),
            Err(Error::TooManyQubits {
                num_qubits: 7,
                max_qubits: 6
            })
        ));
    }

    #[test]
    fn rejects_normalized_terms() {
        let p = PauliString::from_str("Z").unwrap().normalized();
        assert!(matches!(
            HamiltonianSpec::new(1, vec![(1.0, p)]),
            Err(Error::ConventionMismatch(_))
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            HamiltonianSpec::parse("1.0 Z\n0.5 XX", 6),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            HamiltonianSpec::parse("abc Z", 6),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            HamiltonianSpec::parse("1.0 Q", 6),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            HamiltonianSpec::parse("# nothing\n", 6),
            Err(Error::Parse { .. })
        ));
        let spec = h("# comment\n 1.0 Z  # trailing\n\n-2 X\n");
        assert_eq!(spec.terms().len(), 2);
        let again = HamiltonianSpec::parse(&spec.to_text(), 6).unwrap();
        assert_eq!(again.materialize(), spec.materialize());
    }

    #[test]
    fn single_qubit_basis() {
        let b = PauliBasis::full(1).unwrap();
        assert_eq!(b.full_size(), 3);
        let s = 1.0 / 2f64.sqrt();
        assert!(max_diff(&b.elements()[0].matrix(), &pauli_x().scale(s)) < 1e-15);
        assert!(max_diff(&b.elements()[1].matrix(), &pauli_y().scale(s)) < 1e-15);
        assert!(max_diff(&b.elements()[2].matrix(), &pauli_z().scale(s)) < 1e-15);
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = PauliBasis::full(2).unwrap();
        assert_eq!(b.full_size(), 15);
        let names: Vec<String> = b
            .elements()
            .iter()
            .map(|p| p.letters().iter().map(|l| l.as_char()).collect())
            .collect();
        assert_eq!(names[0], "IX");
        assert_eq!(names[3], "XI");
        assert_eq!(names[14], "ZZ");
        assert_eq!(PauliBasis::full(3).unwrap().full_size(), 63);
        assert!(PauliBasis::full(0).is_err());
    }

    #[test]
    fn basis_orthonormal() {
        for n in 1..=2 {
            let b = PauliBasis::full(n).unwrap();
            let d = 1 << n;
            for (j, pj) in b.elements().iter().enumerate() {
                let mj = pj.matrix();
                // P² = 1/d
                let sq = &mj * &mj;
                assert!(max_diff(&sq, &CMatrix::identity(d, d).unscale(d as f64)) < 1e-15);
                for (k, pk) in b.elements().iter().enumerate() {
                    let v = hilbert_schmidt_inner(&mj, &pk.matrix()).unwrap();
                    let expected = if j == k { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(v.re, expected, epsilon = 1e-12);
                    assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn restriction() {
        let b = PauliBasis::full(1).unwrap();
        let r = b.restricted(vec![1]).unwrap();
        assert_eq!(r.effective_size(), 1);
        assert_eq!(r.index_at(0), 1);
        assert!(r.contains(1) && !r.contains(0));
        assert!(b.restricted(vec![]).is_err());
        assert!(b.restricted(vec![3]).is_err());
        assert!(b.restricted(vec![1, 1]).is_err());
        assert_eq!(b.position_of("Y"), Some(1));
    }

    #[test]
    fn expectation_examples() {
        let z = h("1 Z");
        let plus = StateVector::plus(1);
        assert_abs_diff_eq!(expectation(&z, &plus).unwrap(), 0.0, epsilon = 1e-15);
        let one = StateVector::basis(1, 1).unwrap();
        assert_eq!(expectation(&z, &one).unwrap(), -1.0);
        for theta in [0.1, 0.4, 1.3] {
            // cosθ|+⟩ - sinθ|−⟩
            let s2 = 2f64.sqrt();
            let (ct, st) = (f64::cos(theta), f64::sin(theta));
            let psi =
                StateVector::from_amplitudes(vec![c((ct - st) / s2, 0.0), c((ct + st) / s2, 0.0)])
                    .unwrap();
            assert_abs_diff_eq!(
                expectation(&z, &psi).unwrap(),
                -(2.0 * theta).sin(),
                epsilon = 1e-12
            );
        }
        assert!(matches!(
            expectation(&z, &StateVector::plus(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn variance_examples() {
        let z = h("1 Z");
        assert_eq!(
            variance(&z, &StateVector::basis(1, 1).unwrap()).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            variance(&z, &StateVector::plus(1)).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let psi = StateVector::from_amplitudes(vec![c(0.9f64.sqrt(), 0.0), c(0.1f64.sqrt(), 0.0)])
            .unwrap();
        assert_abs_diff_eq!(variance(&z, &psi).unwrap(), 0.36, epsilon = 1e-12);
    }

    fn random_instance() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
        (1usize..=4).prop_flat_map(|n| {
            let d = 1usize << n;
            (
                Just(n),
                prop::collection::vec(-1.0..1.0f64, (1 << (2 * n)) - 1),
                prop::collection::vec(-1.0..1.0f64, 2 * d),
            )
        })
    }

    fn build(n: usize, coeffs: &[f64], amps: &[f64]) -> (HamiltonianSpec, StateVector) {
        let basis = PauliBasis::full(n).unwrap();
        let terms = basis
            .elements()
            .iter()
            .zip(coeffs)
            .map(|(p, &c)| (c, PauliString::new(p.letters().to_vec()).unwrap()))
            .collect();
        let d = 1 << n;
        let state =
            StateVector::from_amplitudes((0..d).map(|k| c(amps[2 * k], amps[2 * k + 1])).collect())
                .unwrap();
        (HamiltonianSpec::new(n, terms).unwrap(), state)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn commutator_norm_is_twice_variance((n, coeffs, amps) in random_instance()) {
            prop_assume!(amps.iter().any(|x| x.abs() > 1e-3));
            let (spec, psi) = build(n, &coeffs, &amps);
            let hm = spec.materialize().matrix();
            let rho = psi.projector();
            let comm = hm * &rho - &rho * hm;
            let lhs = comm.norm_squared();
            let rhs = 2.0 * variance(&spec, &psi).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
        }

        #[test]
        fn expectation_bounded_by_norm((n, coeffs, amps) in random_instance()) {
            prop_assume!(amps.iter().any(|x| x.abs() > 1e-3));
            let (spec, psi) = build(n, &coeffs, &amps);
            let e = expectation(&spec, &psi).unwrap();
            prop_assert!(e.abs() <= spec.spectral_norm() + 1e-12);
        }

        #[test]
        fn parseval_completeness(n in 1usize..=3, coeffs in prop::collection::vec(-1.0..1.0f64, 2 * 64 * 64)) {
            // Random traceless anti-Hermitian A = i·(K - Tr K/d) with K Hermitian.
            let d = 1usize << n;
            let mut k = CMatrix::zeros(d, d);
            for i in 0..d {
                for j in i..d {
                    let z = if i == j { c(coeffs[i * d + j], 0.0) } else { c(coeffs[i * d + j], coeffs[d * d + i * d + j]) };
                    k[(i, j)] = z;
                    k[(j, i)] = z.conj();
                }
            }
            let tr = k.trace() / d as f64;
            let a = (k - CMatrix::identity(d, d) * tr).map(|z| c(0.0, 1.0) * z);
            let basis = PauliBasis::full(n).unwrap();
            let sum: f64 = basis
                .elements()
                .iter()
                .map(|p| hilbert_schmidt_inner(&a, &p.matrix().map(|z| c(0.0, 1.0) * z)).unwrap().norm_sqr())
                .sum();
            prop_assert!((sum - a.norm_squared()).abs() < 1e-10);
        }
    }
}
