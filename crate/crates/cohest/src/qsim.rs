//! Exact small-scale quantum-state linear algebra: density matrices and
//! pure states up to six qubits, entropies in bits, depolarizing and
//! dephasing noise, and finite-shot measurement simulation. This module is
//! the stand-in for the optical experiment: it owns the ground-truth state
//! that every bound is later compared against.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::linalg;
use crate::stabilizer::{matrix_representation, ObservableSum, MAX_QUBITS, MIN_QUBITS};

#[derive(Debug, Error, PartialEq)]
pub enum QsimError {
    #[error("qubit count {0} outside supported range {1}..={2}")]
    QubitCount(usize, usize, usize),
    #[error("array length {got} does not match dimension {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("matrix is not Hermitian within 1e-10 (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1 within 1e-10")]
    BadTrace(f64),
    #[error("matrix has eigenvalue {0:.3e} below -1e-9")]
    NotPositive(f64),
    #[error("state norm² is {0}, expected 1 within 1e-10")]
    NotNormalized(f64),
    #[error("weight {value:.3e} at index {index} is below -1e-12")]
    NegativeWeight { index: usize, value: f64 },
    #[error("weights sum to {0}, expected 1 within 1e-9")]
    WeightSum(f64),
    #[error("noise parameter {0} outside [0, 1]")]
    NoiseParam(f64),
    #[error("{0} shots requested, need at least {1}")]
    ShotCount(u64, u64),
    #[error("observable acts on {got} qubits, state has {expected}")]
    QubitMismatch { expected: usize, got: usize },
    #[error("observable is not Hermitian: tr(Mρ) has imaginary part {0:.3e}")]
    NonHermitianObservable(f64),
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// A validated `2^n × 2^n` density matrix: Hermitian within 1e-10,
/// unit trace within 1e-10, eigenvalues ≥ −1e-9.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self, QsimError> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
            return Err(QsimError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
        }
        let dim = 1usize << n;
        if entries.len() != dim * dim {
            return Err(QsimError::BadLength {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let mut herm_dev = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let dev = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                herm_dev = herm_dev.max(dev);
            }
        }
        if herm_dev > 1e-10 {
            return Err(QsimError::NotHermitian(herm_dev));
        }
        let trace: C64 = (0..dim).map(|i| entries[i * dim + i]).sum();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(QsimError::BadTrace(trace.re));
        }
        let (eigenvalues, _) = linalg::hermitian_eigen(&entries, dim);
        if let Some(&min) = eigenvalues.last() {
            if min < -1e-9 {
                return Err(QsimError::NotPositive(min));
            }
        }
        Ok(Self { n, entries })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let dim = psi.dim();
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = psi.amplitudes[i] * psi.amplitudes[j].conj();
            }
        }
        Self::new(psi.n, entries).expect("outer product of a unit vector is a valid state")
    }

    pub fn maximally_mixed(n: usize) -> Result<Self, QsimError> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
            return Err(QsimError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
        }
        let dim = 1usize << n;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim() + j]
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.entries, self.dim()).0
    }
}

/// A normalized state vector on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(n: usize, amplitudes: Vec<C64>) -> Result<Self, QsimError> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
            return Err(QsimError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
        }
        let dim = 1usize << n;
        if amplitudes.len() != dim {
            return Err(QsimError::BadLength {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-10 {
            return Err(QsimError::NotNormalized(norm2));
        }
        Ok(Self { n, amplitudes })
    }

    /// Builds from (basis index, amplitude) pairs, normalizing the result.
    pub fn from_sparse(n: usize, parts: &[(usize, C64)]) -> Result<Self, QsimError> {
        let dim = 1usize << n;
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for &(idx, a) in parts {
            amps[idx] += a;
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Self::new(n, amps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }
}

/// A probability distribution over `dim` outcomes. Weights in
/// `[-1e-12, 0)` are clamped to zero on construction; the total must be 1
/// within 1e-9.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    weights: Vec<f64>,
}

impl ProbVector {
    pub fn new(mut weights: Vec<f64>) -> Result<Self, QsimError> {
        for (i, w) in weights.iter_mut().enumerate() {
            if *w < 0.0 {
                if *w < -1e-12 {
                    return Err(QsimError::NegativeWeight { index: i, value: *w });
                }
                *w = 0.0;
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(QsimError::WeightSum(sum));
        }
        Ok(Self { weights })
    }

    pub fn uniform(dim: usize) -> Self {
        Self {
            weights: vec![1.0 / dim as f64; dim],
        }
    }

    pub fn point_mass(dim: usize, index: usize) -> Self {
        let mut weights = vec![0.0; dim];
        weights[index] = 1.0;
        Self { weights }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights sorted descending (stable, so ties keep original order).
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut w = self.weights.clone();
        w.sort_by(|a, b| b.partial_cmp(a).expect("weights are finite"));
        w
    }
}

/// One computational-basis measurement campaign: empirical distribution,
/// per-bin binomial standard errors, and the raw counts.
#[derive(Clone, Debug)]
pub struct BasisSample {
    pub probs: ProbVector,
    pub sigmas: Vec<f64>,
    pub counts: Vec<u64>,
    pub shots: u64,
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// The diagonal of ρ in computational-basis order.
pub fn diagonal_distribution(rho: &DensityMatrix) -> ProbVector {
    let dim = rho.dim();
    let weights: Vec<f64> = (0..dim).map(|i| rho.entry(i, i).re).collect();
    ProbVector::new(weights).expect("diagonal of a valid state is a distribution")
}

fn entropy_from(values: impl Iterator<Item = f64>, cutoff: f64) -> f64 {
    let mut s = 0.0;
    for v in values {
        if v > cutoff {
            s -= v * v.log2();
        }
    }
    s.max(0.0)
}

/// `S_VN(ρ) = −tr(ρ log₂ ρ)` in bits; eigenvalues below 1e-12 count as 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_from(rho.eigenvalues().into_iter(), 1e-12)
}

/// `−Σ pᵢ log₂ pᵢ` with `0·log 0 ≡ 0`.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    entropy_from(p.weights.iter().copied(), 0.0)
}

/// Relative entropy of coherence `S(ρ_d) − S(ρ)`, clamped to ≥ 0.
pub fn exact_relative_entropy_coherence(rho: &DensityMatrix) -> f64 {
    (shannon_entropy(&diagonal_distribution(rho)) - von_neumann_entropy(rho)).max(0.0)
}

/// Global white noise `(1−λ)ρ + λ·I/2^n`.
pub fn apply_depolarizing(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix, QsimError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(QsimError::NoiseParam(lambda));
    }
    let dim = rho.dim();
    let mut entries = rho.entries.clone();
    for v in entries.iter_mut() {
        *v *= 1.0 - lambda;
    }
    for i in 0..dim {
        entries[i * dim + i] += C64::new(lambda / dim as f64, 0.0);
    }
    DensityMatrix::new(rho.n, entries)
}

/// Independent per-qubit phase damping: the (i, j) entry is scaled by
/// `(1−γ)` for every qubit on which the two basis strings differ.
pub fn apply_dephasing(rho: &DensityMatrix, gamma: f64) -> Result<DensityMatrix, QsimError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(QsimError::NoiseParam(gamma));
    }
    let dim = rho.dim();
    let mut entries = rho.entries.clone();
    for i in 0..dim {
        for j in 0..dim {
            let differing = (i ^ j).count_ones();
            if differing > 0 {
                entries[i * dim + j] *= (1.0 - gamma).powi(differing as i32);
            }
        }
    }
    DensityMatrix::new(rho.n, entries)
}

/// `tr(M_obs · ρ)`, which must be real for a Hermitian observable.
pub fn expectation(rho: &DensityMatrix, obs: &ObservableSum) -> Result<f64, QsimError> {
    if obs.n() != rho.n {
        return Err(QsimError::QubitMismatch {
            expected: rho.n,
            got: obs.n(),
        });
    }
    let dim = rho.dim();
    let m = matrix_representation(obs);
    let mut tr = C64::new(0.0, 0.0);
    for i in 0..dim {
        for j in 0..dim {
            tr += m[i * dim + j] * rho.entries[j * dim + i];
        }
    }
    if tr.im.abs() >= 1e-9 {
        return Err(QsimError::NonHermitianObservable(tr.im));
    }
    Ok(tr.re)
}

fn expectation_of_string(
    rho: &DensityMatrix,
    p: &crate::stabilizer::PauliString,
) -> Result<f64, QsimError> {
    let single = ObservableSum::single(p.clone()).expect("hermitian term");
    expectation(rho, &single)
}

/// Simulates `shots` two-outcome measurements of each Pauli term and
/// combines them: mean `Σ wⱼ mⱼ`, sigma `√(Σ wⱼ² σⱼ²)`. The identity term
/// contributes mean 1 with no error.
pub fn sample_observable(
    rho: &DensityMatrix,
    obs: &ObservableSum,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<(f64, f64), QsimError> {
    if shots < 2 {
        return Err(QsimError::ShotCount(shots, 2));
    }
    let mut mean = 0.0;
    let mut var = 0.0;
    for (w, p) in obs.terms() {
        if p.is_identity() {
            mean += w;
            continue;
        }
        let e = expectation_of_string(rho, p)?.clamp(-1.0, 1.0);
        let plus = Binomial::new(shots, (1.0 + e) / 2.0)
            .expect("probability in range")
            .sample(rng);
        let m = (2.0 * plus as f64 - shots as f64) / shots as f64;
        // ±1 outcomes: Σ(xᵢ − x̄)² = shots·(1 − x̄²).
        let sigma_sq = (1.0 - m * m).max(0.0) / (shots as f64 - 1.0);
        mean += w * m;
        var += w * w * sigma_sq;
    }
    Ok((mean, var.sqrt()))
}

/// Multinomial sample of the computational-basis distribution, drawn by
/// conditional binomials so the cost is `O(dim)` regardless of `shots`.
pub fn sample_computational_basis(
    rho: &DensityMatrix,
    shots: u64,
    rng: &mut impl Rng,
) -> Result<BasisSample, QsimError> {
    if shots < 1 {
        return Err(QsimError::ShotCount(shots, 1));
    }
    let d = diagonal_distribution(rho);
    let counts = multinomial_counts(d.weights(), shots, rng);
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    let sigmas: Vec<f64> = probs
        .iter()
        .map(|&p| (p * (1.0 - p) / shots as f64).sqrt())
        .collect();
    Ok(BasisSample {
        probs: ProbVector::new(probs).expect("normalized counts"),
        sigmas,
        counts,
        shots,
    })
}

pub(crate) fn multinomial_counts(weights: &[f64], shots: u64, rng: &mut impl Rng) -> Vec<u64> {
    let dim = weights.len();
    let mut counts = vec![0u64; dim];
    let mut remaining = shots;
    let mut rem_p = 1.0f64;
    for i in 0..dim {
        if remaining == 0 {
            break;
        }
        if i == dim - 1 {
            counts[i] = remaining;
            break;
        }
        let p = if rem_p > 1e-15 {
            (weights[i] / rem_p).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = Binomial::new(remaining, p)
            .expect("probability in range")
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        rem_p -= weights[i];
    }
    counts
}

/// `⟨ψ|ρ|ψ⟩`, clamped to [0, 1].
pub fn fidelity(rho: &DensityMatrix, psi: &PureState) -> f64 {
    assert_eq!(rho.n, psi.n, "state dimensions differ");
    let dim = rho.dim();
    let mut value = C64::new(0.0, 0.0);
    for i in 0..dim {
        let mut row = C64::new(0.0, 0.0);
        for j in 0..dim {
            row += rho.entries[i * dim + j] * psi.amplitudes[j];
        }
        value += psi.amplitudes[i].conj() * row;
    }
    debug_assert!(value.im.abs() < 1e-9);
    value.re.clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Random states (simulation and test inputs)
// ---------------------------------------------------------------------------

/// Random full-rank density matrix from the Ginibre ensemble.
pub fn random_density_matrix(n: usize, rng: &mut impl Rng) -> Result<DensityMatrix, QsimError> {
    let dim = 1usize << n;
    let support: Vec<usize> = (0..dim).collect();
    random_density_matrix_on_support(n, &support, rng)
}

/// Random density matrix supported on the given basis indices; every other
/// row and column is zero, which makes the diagonal rank-deficient.
pub fn random_density_matrix_on_support(
    n: usize,
    support: &[usize],
    rng: &mut impl Rng,
) -> Result<DensityMatrix, QsimError> {
    use rand_distr::StandardNormal;
    if !(MIN_QUBITS..=MAX_QUBITS).contains(&n) {
        return Err(QsimError::QubitCount(n, MIN_QUBITS, MAX_QUBITS));
    }
    let dim = 1usize << n;
    let m = support.len();
    assert!(m >= 1 && m <= dim, "support must be a nonempty index subset");
    // G·G† normalized, built on the support block.
    let mut g = vec![C64::new(0.0, 0.0); m * m];
    for v in g.iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v = C64::new(re, im);
    }
    let mut block = vec![C64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut s = C64::new(0.0, 0.0);
            for k in 0..m {
                s += g[i * m + k] * g[j * m + k].conj();
            }
            block[i * m + j] = s;
        }
    }
    let trace: f64 = (0..m).map(|i| block[i * m + i].re).sum();
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..m {
        for j in 0..m {
            entries[support[i] * dim + support[j]] = block[i * m + j] / trace;
        }
    }
    // Exact Hermitian symmetrization to wash out rounding.
    for i in 0..dim {
        for j in (i + 1)..dim {
            let avg = (entries[i * dim + j] + entries[j * dim + i].conj()) * 0.5;
            entries[i * dim + j] = avg;
            entries[j * dim + i] = avg.conj();
        }
    }
    DensityMatrix::new(n, entries)
}
