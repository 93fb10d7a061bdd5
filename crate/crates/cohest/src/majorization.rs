//! The majorization lattice on probability distributions: the ordering,
//! pairwise join and meet via cumulative curves, the flattening (upper
//! concave envelope) step the join needs, and the meet over an
//! LP-constrained measurement polytope.
//!
//! Cumulative curves carry partial sums of descending-sorted weights with
//! an implicit `s₀ = 0`. A distribution's curve is concave; the meet of a
//! family is the pointwise minimum of curves (still concave), while the
//! join takes the pointwise maximum and must then be flattened back to
//! concavity.

use thiserror::Error;

use crate::lp::{self, LinearProgram, LpOutcome};
use crate::qsim::ProbVector;

const ORDER_TOL: f64 = 1e-9;
const REPAIR_TOL: f64 = 1e-7;

#[derive(Debug, Error)]
pub enum MajorizationError {
    #[error("polytope is empty: no probability distribution satisfies the constraints")]
    Infeasible,
    #[error("meet curve non-concave at index {index} by {violation:.3e}; solver failure")]
    ConcavityViolation { index: usize, violation: f64 },
    #[error("curve is not a valid cumulative curve: {0}")]
    BadCurve(String),
    #[error("constraint row {0} has lower bound above upper bound")]
    BadRowBounds(usize),
    #[error("constraint row {row} has coefficient {value}, expected ±1")]
    BadCoefficient { row: usize, value: f64 },
    #[error("length {got} does not match dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lp(#[from] lp::LpError),
}

// ---------------------------------------------------------------------------
// Cumulative curves
// ---------------------------------------------------------------------------

/// Partial sums `s₁ ≤ … ≤ s_dim = 1` of a descending-sorted distribution;
/// concave by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CumulativeCurve {
    s: Vec<f64>,
}

impl CumulativeCurve {
    /// Validates monotonicity, terminal value 1, and concavity.
    pub fn new(s: Vec<f64>) -> Result<Self, MajorizationError> {
        if s.is_empty() {
            return Err(MajorizationError::BadCurve("empty".into()));
        }
        let last = *s.last().expect("nonempty");
        if (last - 1.0).abs() > ORDER_TOL {
            return Err(MajorizationError::BadCurve(format!(
                "terminal value {last}, expected 1"
            )));
        }
        let mut prev = 0.0;
        let mut prev_step = f64::INFINITY;
        for (k, &v) in s.iter().enumerate() {
            if v < prev - ORDER_TOL {
                return Err(MajorizationError::BadCurve(format!(
                    "decreases at index {k}"
                )));
            }
            let step = v - prev;
            if step > prev_step + ORDER_TOL {
                return Err(MajorizationError::BadCurve(format!(
                    "non-concave at index {k}"
                )));
            }
            prev_step = step;
            prev = v;
        }
        Ok(Self { s })
    }

    /// Curve of a distribution: sort descending, take prefix sums.
    pub fn from_distribution(p: &ProbVector) -> Self {
        let sorted = p.sorted_desc();
        let mut acc = 0.0;
        let s = sorted
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { s }
    }

    pub fn dim(&self) -> usize {
        self.s.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    /// Successive differences as a (descending-sorted) distribution.
    pub fn diffs(&self) -> ProbVector {
        let mut prev = 0.0;
        let weights: Vec<f64> = self
            .s
            .iter()
            .map(|&v| {
                let d = v - prev;
                prev = v;
                d
            })
            .collect();
        ProbVector::new(weights).expect("concave nondecreasing curve yields a distribution")
    }
}

// ---------------------------------------------------------------------------
// Ordering, meet, join
// ---------------------------------------------------------------------------

/// `true` iff `a ≻ b`: every prefix sum of `a` sorted descending is at
/// least the matching prefix of `b`, within 1e-9.
pub fn majorizes(a: &ProbVector, b: &ProbVector) -> bool {
    assert_eq!(a.dim(), b.dim(), "distributions have different dimensions");
    let ca = CumulativeCurve::from_distribution(a);
    let cb = CumulativeCurve::from_distribution(b);
    ca.values()
        .iter()
        .zip(cb.values())
        .all(|(x, y)| *x >= y - ORDER_TOL)
}

/// Greatest lower bound of the pair: pointwise minimum of cumulative
/// curves (minimum of concave curves is concave, so no repair is needed).
pub fn meet_pair(a: &ProbVector, b: &ProbVector) -> ProbVector {
    assert_eq!(a.dim(), b.dim(), "distributions have different dimensions");
    let ca = CumulativeCurve::from_distribution(a);
    let cb = CumulativeCurve::from_distribution(b);
    let s: Vec<f64> = ca
        .values()
        .iter()
        .zip(cb.values())
        .map(|(x, y)| x.min(*y))
        .collect();
    CumulativeCurve { s }.diffs()
}

/// Least upper bound of the pair: pointwise maximum of cumulative curves,
/// flattened back to concavity.
pub fn join_pair(a: &ProbVector, b: &ProbVector) -> ProbVector {
    assert_eq!(a.dim(), b.dim(), "distributions have different dimensions");
    let ca = CumulativeCurve::from_distribution(a);
    let cb = CumulativeCurve::from_distribution(b);
    let raw: Vec<f64> = ca
        .values()
        .iter()
        .zip(cb.values())
        .map(|(x, y)| x.max(*y))
        .collect();
    flatten(&raw).diffs()
}

/// Upper concave envelope of `{(0,0), (1,s₁), …, (m,s_m)}`: the smallest
/// concave nondecreasing curve above the input. Single upper-hull scan.
pub fn flatten(raw: &[f64]) -> CumulativeCurve {
    let m = raw.len();
    // Hull vertices as (x, y), x integer.
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(m + 1);
    hull.push((0.0, 0.0));
    for (k, &y) in raw.iter().enumerate() {
        let pt = ((k + 1) as f64, y);
        while hull.len() >= 2 {
            let o = hull[hull.len() - 2];
            let a = hull[hull.len() - 1];
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let mut s = Vec::with_capacity(m);
    let mut seg = 0usize;
    for k in 1..=m {
        let x = k as f64;
        while hull[seg + 1].0 < x {
            seg += 1;
        }
        let (x0, y0) = hull[seg];
        let (x1, y1) = hull[seg + 1];
        let y = if x1 > x0 {
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        } else {
            y1
        };
        s.push(y);
    }
    CumulativeCurve { s }
}

// ---------------------------------------------------------------------------
// The measurement polytope and its meet
// ---------------------------------------------------------------------------

/// One interval row `lower ≤ coeffs·p ≤ upper` with ±1 coefficients.
#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub coeffs: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
}

/// The polytope `X = {p ≥ 0, Σp = 1, β₋ ≤ Bp ≤ β₊}`. Nonnegativity and
/// the normalization row are implicit; `rows` carries the measured
/// constraints.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    dim: usize,
    rows: Vec<ConstraintRow>,
}

impl ConstraintSet {
    pub fn new(dim: usize, rows: Vec<ConstraintRow>) -> Result<Self, MajorizationError> {
        for (idx, row) in rows.iter().enumerate() {
            if row.coeffs.len() != dim {
                return Err(MajorizationError::DimensionMismatch {
                    expected: dim,
                    got: row.coeffs.len(),
                });
            }
            if row.lower > row.upper {
                return Err(MajorizationError::BadRowBounds(idx));
            }
            if let Some(&bad) = row
                .coeffs
                .iter()
                .find(|c| (c.abs() - 1.0).abs() > 1e-12)
            {
                return Err(MajorizationError::BadCoefficient {
                    row: idx,
                    value: bad,
                });
            }
        }
        Ok(Self { dim, rows })
    }

    /// The whole probability simplex: no measured rows at all.
    pub fn simplex(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[ConstraintRow] {
        &self.rows
    }
}

/// Majorization meet of all distributions in the polytope. The k-th
/// cumulative value is `min_{p∈X}` (sum of the k largest entries of p),
/// solved through the epigraph form `min k·θ + Σᵢ uᵢ` with
/// `uᵢ ≥ pᵢ − θ`, `uᵢ ≥ 0`, `p ∈ X`; `s_dim` is 1 by normalization.
pub fn meet_over_polytope(cs: &ConstraintSet) -> Result<ProbVector, MajorizationError> {
    let dim = cs.dim;
    let mut s = vec![0.0; dim];
    s[dim - 1] = 1.0;
    for k in 1..dim {
        match lp::solve(&top_k_program(cs, k))? {
            LpOutcome::Optimal { objective, .. } => s[k - 1] = objective,
            LpOutcome::Infeasible => return Err(MajorizationError::Infeasible),
            // The objective is bounded below by 0 on a bounded polytope.
            LpOutcome::Unbounded => {
                return Err(MajorizationError::ConcavityViolation {
                    index: k,
                    violation: f64::INFINITY,
                })
            }
        }
    }
    if dim == 1 {
        return Ok(ProbVector::point_mass(1, 0));
    }

    // Monotonicity then concavity repair; anything beyond the 1e-7 noise
    // budget signals an LP failure rather than jitter.
    for k in 1..dim {
        if s[k] < s[k - 1] {
            let violation = s[k - 1] - s[k];
            if violation > REPAIR_TOL {
                return Err(MajorizationError::ConcavityViolation { index: k, violation });
            }
            s[k] = s[k - 1];
        }
    }
    for k in 0..dim - 1 {
        let prev = if k == 0 { 0.0 } else { s[k - 1] };
        let mid = 0.5 * (prev + s[k + 1]);
        if s[k] < mid {
            let violation = mid - s[k];
            if violation > REPAIR_TOL {
                return Err(MajorizationError::ConcavityViolation { index: k, violation });
            }
            s[k] = mid;
        }
    }
    Ok(CumulativeCurve { s }.diffs())
}

fn top_k_program(cs: &ConstraintSet, k: usize) -> LinearProgram {
    let dim = cs.dim;
    let theta = dim;
    let u0 = dim + 1;
    let nvars = 2 * dim + 1;
    let mut lp = LinearProgram::new(nvars);
    lp.set_free(theta);

    let mut objective = vec![0.0; nvars];
    objective[theta] = k as f64;
    for i in 0..dim {
        objective[u0 + i] = 1.0;
    }
    lp.set_objective(&objective).expect("sized objective");

    let mut norm = vec![0.0; nvars];
    norm[..dim].fill(1.0);
    lp.add_eq(&norm, 1.0).expect("sized row");

    for row in &cs.rows {
        let mut coeffs = vec![0.0; nvars];
        coeffs[..dim].copy_from_slice(&row.coeffs);
        if row.upper - row.lower <= 1e-15 {
            lp.add_eq(&coeffs, row.lower).expect("sized row");
        } else {
            lp.add_le(&coeffs, row.upper).expect("sized row");
            lp.add_ge(&coeffs, row.lower).expect("sized row");
        }
    }

    for i in 0..dim {
        // pᵢ − θ − uᵢ ≤ 0
        let mut coeffs = vec![0.0; nvars];
        coeffs[i] = 1.0;
        coeffs[theta] = -1.0;
        coeffs[u0 + i] = -1.0;
        lp.add_le(&coeffs, 0.0).expect("sized row");
    }
    lp
}
