//! Executable check of the upper-bound mechanism: build the strictly
//! incoherent channel that maps `|ψ_d⟩⟨ψ_d|` (the maximally coherent state
//! with diagonal `d`) onto an arbitrary state with the same diagonal, and
//! verify completeness, reconstruction, and the monomial Kraus structure.
//! Not on the bounds hot path; this is a proof check and a regression
//! guard for `upper_bound`.

use num_complex::Complex64 as C64;
use rand::Rng;
use thiserror::Error;

use crate::linalg;
use crate::qsim::{
    diagonal_distribution, exact_relative_entropy_coherence, shannon_entropy, DensityMatrix,
    ProbVector,
};

const SUPPORT_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SioError {
    #[error("ensemble diagonal {got:.3e} at index {index} does not match d = {expected:.3e}")]
    DiagonalMismatch { index: usize, got: f64, expected: f64 },
    #[error("target diagonal differs from d at index {0}")]
    TargetDiagonal(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

/// A pure-state decomposition `ρ = Σ λ_α |φ_α⟩⟨φ_α|`.
#[derive(Clone, Debug)]
pub struct EnsembleDecomposition {
    dim: usize,
    weights: Vec<f64>,
    components: Vec<Vec<C64>>,
}

impl EnsembleDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Vec<C64>] {
        &self.components
    }

    /// `Σ λ_α |φ_α⟩⟨φ_α|` for comparisons.
    pub fn reconstruct(&self) -> Vec<C64> {
        let dim = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); dim * dim];
        for (w, comp) in self.weights.iter().zip(&self.components) {
            for i in 0..dim {
                for j in 0..dim {
                    out[i * dim + j] += comp[i] * comp[j].conj() * *w;
                }
            }
        }
        out
    }

    /// Diagonal implied by the ensemble: `dᵢ = Σ_α λ_α |c_{αi}|²`.
    fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for (w, comp) in self.weights.iter().zip(&self.components) {
            for (i, c) in comp.iter().enumerate() {
                d[i] += w * c.norm_sqr();
            }
        }
        d
    }
}

/// Spectral decomposition as the canonical ensemble; eigenvalues below
/// 1e-12 are dropped.
pub fn eigen_ensemble(rho: &DensityMatrix) -> EnsembleDecomposition {
    let dim = rho.dim();
    let (vals, vecs) = crate::linalg::hermitian_eigen(rho.entries(), dim);
    let mut weights = Vec::new();
    let mut components = Vec::new();
    for (k, &v) in vals.iter().enumerate() {
        if v < SUPPORT_TOL {
            continue;
        }
        weights.push(v);
        components.push((0..dim).map(|i| vecs[i * dim + k]).collect());
    }
    EnsembleDecomposition { dim, weights, components }
}

// ---------------------------------------------------------------------------
// Kraus construction
// ---------------------------------------------------------------------------

/// The Kraus operators `K_α = Σᵢ (√λ_α c_{αi}/√dᵢ)|i⟩⟨i|`, stored as
/// diagonals over the support of `d` after the support-first permutation
/// (the identity permutation when every `dᵢ > 0`).
#[derive(Clone, Debug)]
pub struct KrausSet {
    dim: usize,
    /// `perm[new] = old`: support indices first, then the complement.
    perm: Vec<usize>,
    support: usize,
    diagonals: Vec<Vec<C64>>,
}

impl KrausSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn diagonals(&self) -> &[Vec<C64>] {
        &self.diagonals
    }

    /// Expands `M⁻¹ (K_α ⊕ 0) M` to the full space. Conjugating a diagonal
    /// block by a permutation keeps it diagonal, with entries carried to
    /// the original indices.
    pub fn full_matrices(&self) -> Vec<Vec<C64>> {
        self.diagonals
            .iter()
            .map(|kd| {
                let mut full = vec![C64::new(0.0, 0.0); self.dim * self.dim];
                for (j, &v) in kd.iter().enumerate() {
                    let old = self.perm[j];
                    full[old * self.dim + old] = v;
                }
                full
            })
            .collect()
    }
}

/// Builds the channel from an ensemble of the target state. `d` must be
/// the diagonal the ensemble induces, within 1e-9.
pub fn kraus_from_ensemble(
    ens: &EnsembleDecomposition,
    d: &ProbVector,
) -> Result<KrausSet, SioError> {
    let dim = ens.dim();
    if d.dim() != dim {
        return Err(SioError::Dimension(d.dim(), dim));
    }
    let implied = ens.diagonal();
    for (i, (&got, &expected)) in implied.iter().zip(d.weights()).enumerate() {
        if (got - expected).abs() > 1e-9 {
            return Err(SioError::DiagonalMismatch { index: i, got, expected });
        }
    }

    let support_idx: Vec<usize> = (0..dim).filter(|&i| d.weights()[i] > SUPPORT_TOL).collect();
    let rest: Vec<usize> = (0..dim).filter(|&i| d.weights()[i] <= SUPPORT_TOL).collect();
    let support = support_idx.len();
    let mut perm = support_idx;
    perm.extend(rest);

    let diagonals = ens
        .weights()
        .iter()
        .zip(ens.components())
        .map(|(w, comp)| {
            let root = w.sqrt();
            (0..support)
                .map(|j| {
                    let old = perm[j];
                    comp[old] * root / d.weights()[old].sqrt()
                })
                .collect()
        })
        .collect();

    Ok(KrausSet { dim, perm, support, diagonals })
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// What [`apply_and_verify`] measures.
#[derive(Clone, Copy, Debug)]
pub struct SioVerification {
    /// Max entrywise deviation of `Λ(|ψ_d⟩⟨ψ_d|)` from the target.
    pub reconstruction_deviation: f64,
    /// Max entrywise deviation of `Σ K†K` from the identity on the support.
    pub completeness_deviation: f64,
    /// Every expanded Kraus operator is monomial and the permutation maps
    /// basis states to basis states.
    pub strictly_incoherent: bool,
}

/// Applies the channel to `|ψ_d⟩ = Σ√dᵢ|i⟩` and compares with `target`.
pub fn apply_and_verify(
    ks: &KrausSet,
    d: &ProbVector,
    target: &DensityMatrix,
) -> Result<SioVerification, SioError> {
    let dim = ks.dim();
    if d.dim() != dim || target.dim() != dim {
        return Err(SioError::Dimension(d.dim(), target.dim()));
    }
    for i in 0..dim {
        if (target.entry(i, i).re - d.weights()[i]).abs() > 1e-9 {
            return Err(SioError::TargetDiagonal(i));
        }
    }

    let m = ks.support();
    // |ψ_d⟩ in the permuted (support-first) basis.
    let psi_m: Vec<f64> = (0..m).map(|j| d.weights()[ks.perm[j]].sqrt()).collect();

    // σ = Σ_α (K_α ψ)(K_α ψ)† on the support block.
    let mut sigma = vec![C64::new(0.0, 0.0); m * m];
    for kd in ks.diagonals() {
        let v: Vec<C64> = (0..m).map(|j| kd[j] * psi_m[j]).collect();
        for a in 0..m {
            for b in 0..m {
                sigma[a * m + b] += v[a] * v[b].conj();
            }
        }
    }

    // Back to the original basis and compare entrywise.
    let mut reconstruction_deviation = 0.0f64;
    let mut mapped = vec![C64::new(0.0, 0.0); dim * dim];
    for a in 0..m {
        for b in 0..m {
            mapped[ks.perm[a] * dim + ks.perm[b]] = sigma[a * m + b];
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            let dev = (mapped[i * dim + j] - target.entry(i, j)).norm();
            reconstruction_deviation = reconstruction_deviation.max(dev);
        }
    }

    // Completeness on the support: Σ K†K = I_m.
    let mut completeness_deviation = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            let mut s = C64::new(0.0, 0.0);
            for kd in ks.diagonals() {
                // Diagonal operators: (K†K)[a][b] = conj(k_a) k_b δ_ab.
                if a == b {
                    s += kd[a].conj() * kd[b];
                }
            }
            let expect = if a == b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            completeness_deviation = completeness_deviation.max((s - expect).norm());
        }
    }

    // Structural strictness: expanded operators are monomial, and the
    // permutation is a bijection on basis states.
    let mut strictly_incoherent = {
        let mut seen = vec![false; dim];
        ks.perm.len() == dim && ks.perm.iter().all(|&p| p < dim && !std::mem::replace(&mut seen[p], true))
    };
    for full in ks.full_matrices() {
        for i in 0..dim {
            let row_nonzeros = (0..dim).filter(|&j| full[i * dim + j].norm() > 1e-12).count();
            let col_nonzeros = (0..dim).filter(|&j| full[j * dim + i].norm() > 1e-12).count();
            if row_nonzeros > 1 || col_nonzeros > 1 {
                strictly_incoherent = false;
            }
        }
    }

    Ok(SioVerification {
        reconstruction_deviation,
        completeness_deviation,
        strictly_incoherent,
    })
}

// ---------------------------------------------------------------------------
// Batch verification
// ---------------------------------------------------------------------------

/// Aggregate outcome over many random states.
#[derive(Clone, Copy, Debug, Default)]
pub struct SioSummary {
    pub trials: usize,
    pub worst_reconstruction: f64,
    pub worst_completeness: f64,
    pub all_strict: bool,
    /// Smallest value of `S(d) − C_RE(ρ)` seen; the upper bound demands
    /// this stays ≥ −1e-9.
    pub worst_bound_slack: f64,
    pub failures: usize,
}

/// Runs the full Theorem-1 check on random density matrices of the given
/// qubit counts, mixing in rank-deficient diagonals by restricting the
/// support.
pub fn verify_random_states(
    trials: usize,
    qubit_counts: &[usize],
    rng: &mut impl Rng,
) -> SioSummary {
    let mut summary = SioSummary {
        all_strict: true,
        worst_bound_slack: f64::INFINITY,
        ..Default::default()
    };
    for trial in 0..trials {
        let n = qubit_counts[trial % qubit_counts.len()];
        let dim = 1usize << n;
        // Every third state lives on a strict subset of the basis, so some
        // dᵢ are exactly zero and the permutation path is exercised.
        let rho = if trial % 3 == 2 {
            let keep = rng.random_range(1..dim);
            let mut idx: Vec<usize> = (0..dim).collect();
            for i in 0..keep {
                let j = rng.random_range(i..dim);
                idx.swap(i, j);
            }
            let mut support: Vec<usize> = idx[..keep].to_vec();
            support.sort_unstable();
            crate::qsim::random_density_matrix_on_support(n, &support, rng)
        } else {
            crate::qsim::random_density_matrix(n, rng)
        }
        .expect("random state construction");

        let d = diagonal_distribution(&rho);
        let ens = eigen_ensemble(&rho);
        let rebuilt = ens.reconstruct();
        let rebuild_dev = linalg::max_abs_diff(&rebuilt, rho.entries());

        let verification = kraus_from_ensemble(&ens, &d)
            .and_then(|ks| apply_and_verify(&ks, &d, &rho));
        match verification {
            Ok(v) => {
                summary.worst_reconstruction = summary
                    .worst_reconstruction
                    .max(v.reconstruction_deviation)
                    .max(rebuild_dev);
                summary.worst_completeness =
                    summary.worst_completeness.max(v.completeness_deviation);
                summary.all_strict &= v.strictly_incoherent;
            }
            Err(_) => summary.failures += 1,
        }

        let slack = shannon_entropy(&d) - exact_relative_entropy_coherence(&rho);
        summary.worst_bound_slack = summary.worst_bound_slack.min(slack);
        summary.trials += 1;
    }
    summary
}
