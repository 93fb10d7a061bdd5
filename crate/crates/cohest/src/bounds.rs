//! Turns measured stabilizer expectations into interval constraints on the
//! graph-diagonal distribution and evaluates the coherence bounds: the
//! lower bound from the majorization meet over that polytope, the upper
//! bound from the diagonal alone, plus the normalized distance and a
//! bootstrap error bar for the upper bound.

use rand::Rng;
use serde::Serialize;

use crate::majorization::{
    join_pair, meet_over_polytope, ConstraintRow, ConstraintSet, MajorizationError,
};
use crate::qsim::{self, shannon_entropy, ProbVector};
use crate::stabilizer::EigenvalueMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("no measurement records supplied")]
    EmptyRecords,
    #[error("duplicate record for subset bitmask {0:#x}")]
    DuplicateSubset(usize),
    #[error("record bitmask {mask:#x} out of range for dimension {dim}")]
    MaskRange { mask: usize, dim: usize },
    #[error("interval half-width multiplier w = {0} is negative")]
    NegativeWidth(f64),
    #[error("distribution has dimension {d}, constraints have {cs}")]
    DimensionMismatch { d: usize, cs: usize },
    #[error("normalized distance needs a positive exact coherence, got {0}")]
    NonPositiveCoherence(f64),
    #[error("bootstrap needs at least 100 resamples, got {0}")]
    ResampleCount(usize),
    #[error(transparent)]
    Majorization(#[from] MajorizationError),
}

// ---------------------------------------------------------------------------
// Measurement records
// ---------------------------------------------------------------------------

/// A measured stabilizer-element expectation, keyed by the generator-subset
/// bitmask of the element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub subset: usize,
    pub mean: f64,
    pub sigma: f64,
    pub shots: u64,
}

impl MeasurementRecord {
    /// Clamps the mean into [−1, 1]. The identity record (subset 0) is
    /// pinned to mean 1, sigma 0 regardless of the supplied values.
    pub fn new(subset: usize, mean: f64, sigma: f64, shots: u64) -> Self {
        if subset == 0 {
            return Self { subset, mean: 1.0, sigma: 0.0, shots };
        }
        Self {
            subset,
            mean: mean.clamp(-1.0, 1.0),
            sigma: sigma.max(0.0),
            shots,
        }
    }

    pub fn identity() -> Self {
        Self { subset: 0, mean: 1.0, sigma: 0.0, shots: 0 }
    }
}

/// Builds `β₋ ≤ Bp ≤ β₊` from records: one row per record with bounds
/// `mean ± w·sigma`, clamped to the physical range [−1, 1]. `w = 0`
/// degenerates to equality rows. The normalization row is implicit in the
/// returned [`ConstraintSet`].
pub fn build_constraints(
    records: &[MeasurementRecord],
    w: f64,
    b: &EigenvalueMatrix,
) -> Result<ConstraintSet, BoundsError> {
    if records.is_empty() {
        return Err(BoundsError::EmptyRecords);
    }
    if w < 0.0 {
        return Err(BoundsError::NegativeWidth(w));
    }
    let dim = b.dim();
    let mut seen = vec![false; dim];
    let mut rows = Vec::with_capacity(records.len());
    for rec in records {
        if rec.subset >= dim {
            return Err(BoundsError::MaskRange { mask: rec.subset, dim });
        }
        if seen[rec.subset] {
            return Err(BoundsError::DuplicateSubset(rec.subset));
        }
        seen[rec.subset] = true;
        let half = w * rec.sigma;
        rows.push(ConstraintRow {
            coeffs: b.row(rec.subset).to_vec(),
            lower: (rec.mean - half).clamp(-1.0, 1.0),
            upper: (rec.mean + half).clamp(-1.0, 1.0),
        });
    }
    Ok(ConstraintSet::new(dim, rows)?)
}

// ---------------------------------------------------------------------------
// The bounds
// ---------------------------------------------------------------------------

/// Why a lower-bound evaluation produced no usable value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvalidReason {
    /// The constraint polytope is empty.
    NoSolution,
    /// The bound evaluated to ≤ 0 and carries no information.
    NonPositive,
}

/// Outcome of a lower-bound evaluation. Invalid outcomes are values, not
/// errors: subset scans count them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LowerBound {
    Valid(f64),
    Invalid(InvalidReason),
}

impl LowerBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            LowerBound::Valid(v) => Some(*v),
            LowerBound::Invalid(_) => None,
        }
    }

    pub fn is_valid(&self) -> bool {
        matches!(self, LowerBound::Valid(_))
    }
}

/// `l_c = S(d) − S(d ∨ (∧_{p∈X} p))`: meet of the polytope, join with the
/// measured diagonal, entropy gap. Infeasible polytopes and non-positive
/// values come back as [`LowerBound::Invalid`].
pub fn lower_bound(d: &ProbVector, cs: &ConstraintSet) -> Result<LowerBound, BoundsError> {
    if d.dim() != cs.dim() {
        return Err(BoundsError::DimensionMismatch { d: d.dim(), cs: cs.dim() });
    }
    let meet = match meet_over_polytope(cs) {
        Ok(meet) => meet,
        Err(MajorizationError::Infeasible) => {
            return Ok(LowerBound::Invalid(InvalidReason::NoSolution))
        }
        Err(other) => return Err(other.into()),
    };
    let joined = join_pair(d, &meet);
    let l = shannon_entropy(d) - shannon_entropy(&joined);
    if l <= 1e-12 {
        Ok(LowerBound::Invalid(InvalidReason::NonPositive))
    } else {
        Ok(LowerBound::Valid(l))
    }
}

/// `u_c = C_RE(|ψ_d⟩⟨ψ_d|)`, which for `|ψ_d⟩ = Σ√dᵢ|i⟩` is exactly the
/// Shannon entropy of the diagonal.
pub fn upper_bound(d: &ProbVector) -> f64 {
    shannon_entropy(d)
}

/// Bootstrap standard error of `u_c`: resample the observed counts,
/// recompute the entropy, return the sample standard deviation.
pub fn uncertainty_u_c(
    counts: &[u64],
    shots: u64,
    resamples: usize,
    rng: &mut impl Rng,
) -> Result<f64, BoundsError> {
    if resamples < 100 {
        return Err(BoundsError::ResampleCount(resamples));
    }
    let total: u64 = counts.iter().sum();
    debug_assert_eq!(total, shots, "counts must sum to the shot count");
    let observed: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
    let mut values = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let resampled = qsim::multinomial_counts(&observed, shots, rng);
        let p: Vec<f64> = resampled.iter().map(|&c| c as f64 / shots as f64).collect();
        let h: f64 = p.iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum();
        values.push(h);
    }
    let mean = values.iter().sum::<f64>() / resamples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (resamples as f64 - 1.0);
    Ok(var.sqrt())
}

/// `𝒟 = (C_RE − l_c)/C_RE`.
pub fn normalized_distance(c_re: f64, l_c: f64) -> Result<f64, BoundsError> {
    if c_re <= 0.0 {
        return Err(BoundsError::NonPositiveCoherence(c_re));
    }
    Ok((c_re - l_c) / c_re)
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One evaluated bound: everything a CSV row or JSON record needs, minus
/// the campaign-level context (noise, shots, seed) that the harness adds.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub state: String,
    pub n: usize,
    pub w: f64,
    /// Bit `T` set when group element `S_T` was constrained (identity
    /// excluded).
    pub subset_mask: u64,
    /// Number of non-identity elements constrained.
    pub m: usize,
    pub l_c: LowerBound,
    pub u_c: f64,
    pub u_c_sigma: Option<f64>,
    pub c_re_exact: Option<f64>,
    /// `(C_RE − l_c)/C_RE` when both are available.
    pub distance: Option<f64>,
    pub fidelity: Option<f64>,
    pub elapsed_micros: u64,
}
