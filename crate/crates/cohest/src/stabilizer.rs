//! Pauli-string algebra with phase tracking, stabilizer generator sets for
//! the states used throughout (GHZ, linear cluster, |C₄⟩, W), group closure
//! over generator subsets, and the ±1 eigenvalue matrix that links
//! stabilizer expectations to the graph-diagonal probability vector.
//!
//! Group elements are indexed by a generator-subset bitmask `T`: bit `i`
//! of `T` selects generator `S_{i+1}`, `T = 0` is the identity. The same
//! indexing is used for measurement records and for the rows of
//! [`EigenvalueMatrix`], which keeps every sign convention in one place.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::linalg;

pub const MIN_QUBITS: usize = 1;
pub const MAX_QUBITS: usize = 6;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("qubit count {0} outside supported range {1}..={2}")]
    QubitCount(usize, usize, usize),
    #[error("operands act on {0} vs {1} qubits")]
    DimensionMismatch(usize, usize),
    #[error("product has a residual imaginary part; operands do not commute or are malformed")]
    NonHermitianProduct,
    #[error("matrix is not unitary within 1e-9")]
    NonUnitary,
    #[error("{got} generators supplied for {expected} qubits")]
    GeneratorCount { expected: usize, got: usize },
    #[error("weighted term has a non-real phase")]
    NonRealTerm,
    #[error("cannot parse Pauli string: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Single-qubit letters and phases
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    fn matrix(self) -> [C64; 4] {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            PauliLetter::I => [l, o, o, l],
            PauliLetter::X => [o, l, l, o],
            PauliLetter::Y => [o, -i, i, o],
            PauliLetter::Z => [l, o, o, -l],
        }
    }

    /// Single-qubit product `a·b` as (power of i, letter).
    fn mul(a: PauliLetter, b: PauliLetter) -> (u8, PauliLetter) {
        use PauliLetter::*;
        match (a, b) {
            (I, x) => (0, x),
            (x, I) => (0, x),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }

    fn symbol(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }
}

/// Phase of a Pauli string, stored as the exponent of `i` (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const PLUS: Phase = Phase(0);
    pub const MINUS: Phase = Phase(2);

    pub fn from_i_power(k: u8) -> Phase {
        Phase(k % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// +1.0 or −1.0; panics on imaginary phases.
    pub fn sign(self) -> f64 {
        match self.0 {
            0 => 1.0,
            2 => -1.0,
            _ => panic!("imaginary phase has no real sign"),
        }
    }

    pub fn as_complex(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }
}

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

/// A signed (possibly imaginary-phased) tensor product of Pauli matrices.
/// Qubit 1 is the leftmost letter, matching the basis-index convention
/// where the first qubit is the most significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<PauliLetter>,
    phase: Phase,
}

impl PauliString {
    pub fn new(letters: Vec<PauliLetter>, phase: Phase) -> Self {
        assert!(!letters.is_empty(), "empty Pauli string");
        Self { letters, phase }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![PauliLetter::I; n], Phase::PLUS)
    }

    /// `Z` on qubit `j` (1-based), identity elsewhere.
    pub fn z_on(n: usize, j: usize) -> Self {
        let mut letters = vec![PauliLetter::I; n];
        letters[j - 1] = PauliLetter::Z;
        Self::new(letters, Phase::PLUS)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&l| l == PauliLetter::I)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// Dense `2^n × 2^n` matrix representation, phase included.
    pub fn matrix(&self) -> Vec<C64> {
        let mut m: Vec<C64> = self.letters[0].matrix().to_vec();
        let mut dim = 2usize;
        for letter in &self.letters[1..] {
            m = linalg::kron(&m, dim, &letter.matrix(), 2);
            dim *= 2;
        }
        let ph = self.phase.as_complex();
        for v in m.iter_mut() {
            *v *= ph;
        }
        m
    }
}

/// Product with phase tracking over {±1, ±i}.
pub fn pauli_product(a: &PauliString, b: &PauliString) -> PauliString {
    assert_eq!(a.n(), b.n(), "pauli strings act on different qubit counts");
    let mut phase = a.phase.mul(b.phase);
    let letters = a
        .letters
        .iter()
        .zip(&b.letters)
        .map(|(&la, &lb)| {
            let (k, l) = PauliLetter::mul(la, lb);
            phase = phase.mul(Phase::from_i_power(k));
            l
        })
        .collect();
    PauliString { letters, phase }
}

impl FromStr for PauliString {
    type Err = StabilizerError;

    /// Parses strings like `XXX`, `-YYX`, `+ZZI`. `I/X/Y/Z` letters only.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (phase, rest) = if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::PLUS, r)
        } else {
            (Phase::PLUS, s)
        };
        let letters: Result<Vec<PauliLetter>, _> = rest
            .chars()
            .map(|c| match c {
                'I' => Ok(PauliLetter::I),
                'X' => Ok(PauliLetter::X),
                'Y' => Ok(PauliLetter::Y),
                'Z' => Ok(PauliLetter::Z),
                other => Err(StabilizerError::Parse(format!("bad letter '{other}' in {s}"))),
            })
            .collect();
        let letters = letters?;
        if letters.is_empty() {
            return Err(StabilizerError::Parse(format!("empty string: {s:?}")));
        }
        Ok(PauliString::new(letters, phase))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase.0 {
            0 => {}
            1 => write!(f, "i")?,
            2 => write!(f, "-")?,
            _ => write!(f, "-i")?,
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Weighted sums of Pauli strings
// ---------------------------------------------------------------------------

/// A Hermitian observable: a real-weighted sum of Pauli strings. Signs are
/// folded into the weights, so stored strings carry phase +1 and terms are
/// kept sorted by letters for deterministic iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl ObservableSum {
    /// Builds from weighted strings with real (±1) phase. Like terms merge;
    /// negligible weights drop.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (f64, PauliString)>,
    ) -> Result<Self, StabilizerError> {
        let mut acc: BTreeMap<Vec<PauliLetter>, f64> = BTreeMap::new();
        for (w, p) in terms {
            if p.n() != n {
                return Err(StabilizerError::DimensionMismatch(n, p.n()));
            }
            if !p.is_hermitian() {
                return Err(StabilizerError::NonRealTerm);
            }
            *acc.entry(p.letters.clone()).or_insert(0.0) += w * p.phase.sign();
        }
        Ok(Self::from_real_map(n, acc))
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            terms: vec![(1.0, PauliString::identity(n))],
        }
    }

    pub fn single(p: PauliString) -> Result<Self, StabilizerError> {
        let n = p.n();
        Self::from_terms(n, [(1.0, p)])
    }

    fn from_real_map(n: usize, acc: BTreeMap<Vec<PauliLetter>, f64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, w)| w.abs() >= 1e-12)
            .map(|(letters, w)| (w, PauliString::new(letters, Phase::PLUS)))
            .collect();
        Self { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Terms as (signed weight, phase-+1 string), sorted by letters.
    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn is_identity(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].1.is_identity()
            && (self.terms[0].0 - 1.0).abs() < 1e-12
    }

    /// Coefficient-level comparison, order-independent.
    pub fn approx_eq(&self, other: &ObservableSum, tol: f64) -> bool {
        if self.n != other.n || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|((wa, pa), (wb, pb))| pa.letters == pb.letters && (wa - wb).abs() <= tol)
    }
}

impl fmt::Display for ObservableSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (w, p)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " {} ", if *w < 0.0 { "-" } else { "+" })?;
            } else if *w < 0.0 {
                write!(f, "-")?;
            }
            let aw = w.abs();
            if (aw - 1.0).abs() > 1e-12 {
                write!(f, "{aw:.6}·")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Distributes term-by-term [`pauli_product`], merging like terms. Any
/// surviving imaginary component means the operands do not commute.
pub fn observable_product(
    a: &ObservableSum,
    b: &ObservableSum,
) -> Result<ObservableSum, StabilizerError> {
    assert_eq!(a.n, b.n, "observables act on different qubit counts");
    let mut acc: BTreeMap<Vec<PauliLetter>, C64> = BTreeMap::new();
    for (wa, pa) in &a.terms {
        for (wb, pb) in &b.terms {
            let prod = pauli_product(pa, pb);
            let coeff = C64::new(wa * wb, 0.0) * prod.phase.as_complex();
            *acc.entry(prod.letters).or_insert(C64::new(0.0, 0.0)) += coeff;
        }
    }
    let mut real: BTreeMap<Vec<PauliLetter>, f64> = BTreeMap::new();
    for (letters, coeff) in acc {
        if coeff.im.abs() > 1e-9 {
            return Err(StabilizerError::NonHermitianProduct);
        }
        if coeff.re.abs() >= 1e-12 {
            real.insert(letters, coeff.re);
        }
    }
    Ok(ObservableSum::from_real_map(a.n, real))
}

/// Dense matrix of a weighted Pauli sum.
pub fn matrix_representation(obs: &ObservableSum) -> Vec<C64> {
    let dim = 1usize << obs.n;
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for (w, p) in &obs.terms {
        let pm = p.matrix();
        for (v, pv) in m.iter_mut().zip(pm) {
            *v += C64::new(*w, 0.0) * pv;
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Stabilizer sets and the eigenvalue matrix
// ---------------------------------------------------------------------------

/// `n` commuting generators plus the full `2^n`-element group, indexed by
/// generator-subset bitmask.
#[derive(Clone, Debug)]
pub struct StabilizerSet {
    n: usize,
    generators: Vec<ObservableSum>,
    elements: Vec<ObservableSum>,
}

impl StabilizerSet {
    pub fn from_generators(
        n: usize,
        generators: Vec<ObservableSum>,
    ) -> Result<Self, StabilizerError> {
        if generators.len() != n {
            return Err(StabilizerError::GeneratorCount {
                expected: n,
                got: generators.len(),
            });
        }
        for g in &generators {
            if g.n() != n {
                return Err(StabilizerError::DimensionMismatch(n, g.n()));
            }
        }
        let size = 1usize << n;
        let mut elements = Vec::with_capacity(size);
        elements.push(ObservableSum::identity(n));
        for t in 1..size {
            let low = t.trailing_zeros() as usize;
            let rest = t & (t - 1);
            let elem = observable_product(&generators[low], &elements[rest])?;
            elements.push(elem);
        }
        Ok(Self {
            n,
            generators,
            elements,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[ObservableSum] {
        &self.generators
    }

    /// Group element for generator-subset bitmask `t` (`t = 0` → identity).
    pub fn element(&self, t: usize) -> &ObservableSum {
        &self.elements[t]
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }
}

/// GHZ generators: `S₁ = X…X`, `Sᵢ = Z^{(i−1)}Z^{(i)}`.
pub fn ghz_generators(n: usize) -> Result<StabilizerSet, StabilizerError> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(StabilizerError::QubitCount(n, 2, MAX_QUBITS));
    }
    let mut gens = Vec::with_capacity(n);
    gens.push(ObservableSum::single(PauliString::new(
        vec![PauliLetter::X; n],
        Phase::PLUS,
    ))?);
    for i in 2..=n {
        let mut letters = vec![PauliLetter::I; n];
        letters[i - 2] = PauliLetter::Z;
        letters[i - 1] = PauliLetter::Z;
        gens.push(ObservableSum::single(PauliString::new(letters, Phase::PLUS))?);
    }
    StabilizerSet::from_generators(n, gens)
}

/// Linear-cluster generators: `XZ𝕀…`, `…ZXZ…`, `…𝕀ZX`.
pub fn linear_cluster_generators(n: usize) -> Result<StabilizerSet, StabilizerError> {
    if !(2..=MAX_QUBITS).contains(&n) {
        return Err(StabilizerError::QubitCount(n, 2, MAX_QUBITS));
    }
    let mut gens = Vec::with_capacity(n);
    for i in 1..=n {
        let mut letters = vec![PauliLetter::I; n];
        letters[i - 1] = PauliLetter::X;
        if i > 1 {
            letters[i - 2] = PauliLetter::Z;
        }
        if i < n {
            letters[i] = PauliLetter::Z;
        }
        gens.push(ObservableSum::single(PauliString::new(letters, Phase::PLUS))?);
    }
    StabilizerSet::from_generators(n, gens)
}

/// Generators of |C₄⟩, the Hadamard-on-ends form of the 4-qubit linear
/// cluster: `{ZZ𝕀𝕀, XXZ𝕀, 𝕀ZXX, 𝕀𝕀ZZ}`.
pub fn cluster_c4_generators() -> StabilizerSet {
    let gens = ["ZZII", "XXZI", "IZXX", "IIZZ"]
        .iter()
        .map(|s| ObservableSum::single(s.parse().expect("literal")).expect("hermitian"))
        .collect();
    StabilizerSet::from_generators(4, gens).expect("fixed generator table")
}

/// Conjugates the single-qubit `Z` stabilizers of |0…0⟩ by `u`:
/// `Sᵢ = U Z⁽ⁱ⁾ U†`, decomposed in the Pauli basis via trace inner
/// products. Coefficients below 1e-12 are dropped.
pub fn conjugated_generators(u: &[C64], n: usize) -> Result<StabilizerSet, StabilizerError> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(StabilizerError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
    }
    let dim = 1usize << n;
    assert_eq!(u.len(), dim * dim, "unitary has wrong dimension");
    if !linalg::is_unitary(u, dim, 1e-9) {
        return Err(StabilizerError::NonUnitary);
    }

    let u_dag = linalg::adjoint(u, dim);
    let mut gens = Vec::with_capacity(n);
    for i in 1..=n {
        let z = PauliString::z_on(n, i).matrix();
        let s = linalg::mat_mul(&linalg::mat_mul(u, &z, dim), &u_dag, dim);
        let mut terms: Vec<(f64, PauliString)> = Vec::new();
        for code in 0..(4usize.pow(n as u32)) {
            let letters: Vec<PauliLetter> = (0..n)
                .map(|q| match (code >> (2 * (n - 1 - q))) & 3 {
                    0 => PauliLetter::I,
                    1 => PauliLetter::X,
                    2 => PauliLetter::Y,
                    _ => PauliLetter::Z,
                })
                .collect();
            let p = PauliString::new(letters, Phase::PLUS);
            let pm = p.matrix();
            // tr(P·S) / 2^n
            let mut tr = C64::new(0.0, 0.0);
            for r in 0..dim {
                for c in 0..dim {
                    tr += pm[r * dim + c] * s[c * dim + r];
                }
            }
            let coeff = tr / dim as f64;
            if coeff.im.abs() > 1e-9 {
                return Err(StabilizerError::NonHermitianProduct);
            }
            if coeff.re.abs() >= 1e-12 {
                terms.push((coeff.re, p));
            }
        }
        gens.push(ObservableSum::from_terms(n, terms)?);
    }
    StabilizerSet::from_generators(n, gens)
}

/// The printed 3-qubit W-state preparation unitary `(XZ𝕀 + 𝕀XZ + Z𝕀X)/√3`.
pub fn w3_unitary() -> Vec<C64> {
    weighted_string_matrix(3, &[("XZI", 1.0), ("IXZ", 1.0), ("ZIX", 1.0)], 3f64.sqrt())
}

/// The printed 4-qubit W-state preparation unitary
/// `(ZZZX + ZZX𝕀 + ZX𝕀𝕀 + X𝕀𝕀𝕀)/2`.
pub fn w4_unitary() -> Vec<C64> {
    weighted_string_matrix(
        4,
        &[("ZZZX", 1.0), ("ZZXI", 1.0), ("ZXII", 1.0), ("XIII", 1.0)],
        2.0,
    )
}

fn weighted_string_matrix(n: usize, strings: &[(&str, f64)], denom: f64) -> Vec<C64> {
    let dim = 1usize << n;
    let mut m = vec![C64::new(0.0, 0.0); dim * dim];
    for (s, w) in strings {
        let p: PauliString = s.parse().expect("literal");
        for (v, pv) in m.iter_mut().zip(p.matrix()) {
            *v += C64::new(w / denom, 0.0) * pv;
        }
    }
    m
}

/// The ±1 matrix `B[T][k] = (−1)^{popcount(T ∧ k)}`: row `T` lists the
/// eigenvalues of group element `S_T` across the graph-diagonal basis.
#[derive(Clone, Debug)]
pub struct EigenvalueMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl EigenvalueMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.rows[t]
    }

    pub fn entry(&self, t: usize, k: usize) -> f64 {
        self.rows[t][k]
    }
}

pub fn eigenvalue_matrix(n: usize) -> Result<EigenvalueMatrix, StabilizerError> {
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(StabilizerError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
    }
    let dim = 1usize << n;
    let rows = (0..dim)
        .map(|t| {
            (0..dim)
                .map(|k| if (t & k).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    Ok(EigenvalueMatrix { n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(s: &str) -> ObservableSum {
        ObservableSum::single(s.parse().expect("parse")).expect("hermitian")
    }

    fn sum(n: usize, terms: &[(f64, &str)]) -> ObservableSum {
        ObservableSum::from_terms(
            n,
            terms
                .iter()
                .map(|(w, s)| (*w, s.parse::<PauliString>().expect("parse"))),
        )
        .expect("hermitian")
    }

    #[test]
    fn pauli_product_tracks_signs() {
        let xxx: PauliString = "XXX".parse().unwrap();
        let zzi: PauliString = "ZZI".parse().unwrap();
        let prod = pauli_product(&xxx, &zzi);
        assert_eq!(prod, "-YYX".parse().unwrap());

        // Hermitian strings square to the identity with phase +1.
        for s in ["XYZ", "-YYX", "ZIZ", "XXXX"] {
            let p: PauliString = s.parse().unwrap();
            let sq = pauli_product(&p, &p);
            assert!(sq.is_identity());
            assert_eq!(sq.phase(), Phase::PLUS);
        }

        let a: PauliString = "ZZII".parse().unwrap();
        let b: PauliString = "IIZZ".parse().unwrap();
        assert_eq!(pauli_product(&a, &b), "ZZZZ".parse().unwrap());
    }

    #[test]
    fn observable_product_merges_terms() {
        let id = ObservableSum::identity(3);
        let a = sum(3, &[(0.5, "XXI"), (0.5, "ZZI")]);
        assert!(observable_product(&a, &id).unwrap().approx_eq(&a, 1e-12));

        // W₃ generator products against the printed tables.
        let w3 = w_state_3();
        let s4 = observable_product(w3.element(0b001), w3.element(0b010)).unwrap();
        let expect_s4 = sum(
            3,
            &[(2.0 / 3.0, "XIX"), (2.0 / 3.0, "IYY"), (-1.0 / 3.0, "ZZI")],
        );
        assert!(s4.approx_eq(&expect_s4, 1e-12), "got {s4}");

        let s7 = w3.element(0b111);
        assert!(s7.approx_eq(&sum(3, &[(-1.0, "ZZZ")]), 1e-12), "got {s7}");
    }

    fn w_state_3() -> StabilizerSet {
        conjugated_generators(&w3_unitary(), 3).expect("w3 unitary")
    }

    #[test]
    fn w3_generators_match_printed_form() {
        let w3 = w_state_3();
        let printed = [
            sum(3, &[(1.0 / 3.0, "ZII"), (2.0 / 3.0, "YYZ"), (2.0 / 3.0, "XZX")]),
            sum(3, &[(1.0 / 3.0, "IZI"), (2.0 / 3.0, "ZYY"), (2.0 / 3.0, "XXZ")]),
            sum(3, &[(1.0 / 3.0, "IIZ"), (2.0 / 3.0, "YZY"), (2.0 / 3.0, "ZXX")]),
        ];
        for (g, e) in w3.generators().iter().zip(&printed) {
            assert!(g.approx_eq(e, 1e-10), "generator {g} vs printed {e}");
        }
    }

    #[test]
    fn ghz_generator_tables() {
        let g3 = ghz_generators(3).unwrap();
        assert!(g3.element(0b001).approx_eq(&obs("XXX"), 1e-12));
        assert!(g3.element(0b010).approx_eq(&obs("ZZI"), 1e-12));
        assert!(g3.element(0b100).approx_eq(&obs("IZZ"), 1e-12));
        assert!(g3.element(0b011).approx_eq(&sum(3, &[(-1.0, "YYX")]), 1e-12));

        let g4 = ghz_generators(4).unwrap();
        // S₁S₂S₄ = YYYY with + sign.
        assert!(g4.element(0b1011).approx_eq(&obs("YYYY"), 1e-12));
        assert!(g4.element(0b1010).approx_eq(&obs("ZZZZ"), 1e-12));

        assert!(ghz_generators(1).is_err());
        assert!(ghz_generators(7).is_err());
    }

    #[test]
    fn c4_closure_matches_printed_elements() {
        let c4 = cluster_c4_generators();
        assert!(c4.element(0b1001).approx_eq(&obs("ZZZZ"), 1e-12)); // S₁S₄
        assert!(c4
            .element(0b0011)
            .approx_eq(&sum(4, &[(-1.0, "YYZI")]), 1e-12)); // S₁S₂
        assert!(c4.element(0).is_identity());
    }

    #[test]
    fn group_law_holds_exhaustively() {
        for set in [
            ghz_generators(3).unwrap(),
            ghz_generators(4).unwrap(),
            cluster_c4_generators(),
            w_state_3(),
            conjugated_generators(&w4_unitary(), 4).unwrap(),
        ] {
            let size = set.num_elements();
            for t1 in 0..size {
                for t2 in 0..size {
                    let prod = observable_product(set.element(t1), set.element(t2)).unwrap();
                    assert!(
                        prod.approx_eq(set.element(t1 ^ t2), 1e-9),
                        "element({t1})·element({t2}) != element({})",
                        t1 ^ t2
                    );
                }
            }
        }
    }

    #[test]
    fn projectors_from_eigenvalue_rows_resolve_identity() {
        // 2^{-n} Σ_T B[T][k] · M(S_T) must be the rank-1 projector onto the
        // k-th joint eigenstate, and the projectors must sum to 1.
        for set in [
            ghz_generators(2).unwrap(),
            ghz_generators(3).unwrap(),
            w_state_3(),
            cluster_c4_generators(),
        ] {
            let n = set.n();
            let dim = 1usize << n;
            let b = eigenvalue_matrix(n).unwrap();
            let matrices: Vec<Vec<C64>> = (0..dim)
                .map(|t| matrix_representation(set.element(t)))
                .collect();
            let mut sum = vec![C64::new(0.0, 0.0); dim * dim];
            for k in 0..dim {
                let mut p = vec![C64::new(0.0, 0.0); dim * dim];
                for t in 0..dim {
                    let coeff = b.entry(t, k) / dim as f64;
                    for (pv, mv) in p.iter_mut().zip(&matrices[t]) {
                        *pv += C64::new(coeff, 0.0) * *mv;
                    }
                }
                // Idempotent with unit trace ⇒ rank-1 projector.
                let sq = crate::linalg::mat_mul(&p, &p, dim);
                assert!(
                    crate::linalg::max_abs_diff(&sq, &p) < 1e-9,
                    "n={n} k={k}: projector is not idempotent"
                );
                let trace: C64 = (0..dim).map(|i| p[i * dim + i]).sum();
                assert!((trace.re - 1.0).abs() < 1e-9 && trace.im.abs() < 1e-12);
                for (sv, pv) in sum.iter_mut().zip(&p) {
                    *sv += *pv;
                }
            }
            assert!(
                crate::linalg::max_abs_diff(&sum, &crate::linalg::identity(dim)) < 1e-9,
                "n={n}: projectors do not resolve the identity"
            );
        }
    }

    #[test]
    fn elements_square_to_identity() {
        for set in [w_state_3(), cluster_c4_generators(), conjugated_generators(&w4_unitary(), 4).unwrap()] {
            let dim = 1usize << set.n();
            for t in 0..set.num_elements() {
                let m = matrix_representation(set.element(t));
                let sq = crate::linalg::mat_mul(&m, &m, dim);
                assert!(
                    crate::linalg::max_abs_diff(&sq, &crate::linalg::identity(dim)) < 1e-9,
                    "element {t} does not square to identity"
                );
            }
        }
    }

    #[test]
    fn conjugating_by_identity_returns_z_strings() {
        let n = 2;
        let set = conjugated_generators(&crate::linalg::identity(4), n).unwrap();
        assert!(set.element(0b01).approx_eq(&obs("ZI"), 1e-12));
        assert!(set.element(0b10).approx_eq(&obs("IZ"), 1e-12));
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = crate::linalg::identity(4);
        m[0] = C64::new(2.0, 0.0);
        assert_eq!(
            conjugated_generators(&m, 2).unwrap_err(),
            StabilizerError::NonUnitary
        );
    }

    #[test]
    fn eigenvalue_matrix_structure() {
        let b1 = eigenvalue_matrix(1).unwrap();
        assert_eq!(b1.row(0), &[1.0, 1.0]);
        assert_eq!(b1.row(1), &[1.0, -1.0]);

        for n in 1..=5usize {
            let b = eigenvalue_matrix(n).unwrap();
            let dim = b.dim();
            assert_eq!(b.row(0), vec![1.0; dim].as_slice());
            // B·Bᵀ = 2^n · I
            for t1 in 0..dim {
                for t2 in 0..dim {
                    let dot: f64 = (0..dim).map(|k| b.entry(t1, k) * b.entry(t2, k)).sum();
                    let expect = if t1 == t2 { dim as f64 } else { 0.0 };
                    assert!(
                        (dot - expect).abs() < 1e-12,
                        "n={n} rows {t1},{t2} not orthogonal"
                    );
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
            (
                proptest::collection::vec(0u8..4, n),
                0u8..4,
            )
                .prop_map(|(codes, phase)| {
                    let letters = codes
                        .iter()
                        .map(|c| match c {
                            0 => PauliLetter::I,
                            1 => PauliLetter::X,
                            2 => PauliLetter::Y,
                            _ => PauliLetter::Z,
                        })
                        .collect();
                    PauliString::new(letters, Phase::from_i_power(phase))
                })
        }

        proptest! {
            #[test]
            fn product_is_associative((a, b, c) in (pauli(4), pauli(4), pauli(4))) {
                let left = pauli_product(&pauli_product(&a, &b), &c);
                let right = pauli_product(&a, &pauli_product(&b, &c));
                prop_assert_eq!(left, right);
            }

            #[test]
            fn product_matches_matrix_multiplication((a, b) in (pauli(3), pauli(3))) {
                let prod = pauli_product(&a, &b);
                let direct = crate::linalg::mat_mul(&a.matrix(), &b.matrix(), 8);
                prop_assert!(crate::linalg::max_abs_diff(&prod.matrix(), &direct) < 1e-12);
            }
        }
    }

    #[test]
    fn bell_pair_eigenvalue_rows() {
        // Generators XX, ZZ label the Bell basis with eigenvalue pairs
        // (+1,+1), (−1,+1), (+1,−1), (−1,−1) across columns.
        let b = eigenvalue_matrix(2).unwrap();
        let pairs: Vec<(f64, f64)> = (0..4).map(|k| (b.entry(0b01, k), b.entry(0b10, k))).collect();
        assert_eq!(
            pairs,
            vec![(1.0, 1.0), (-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)]
        );
    }
}
