//! Dense two-phase primal simplex for the small linear programs produced by
//! the polytope-meet construction.
//!
//! Minimizes `c·x` subject to equality rows, `≤` rows, and per-variable
//! lower bounds (finite or unbounded). Bland's rule is used for both the
//! entering and leaving choices, so the iteration cannot cycle; problems
//! here have at most a few hundred variables, which makes a dense tableau
//! the right trade-off.

use thiserror::Error;

/// Hard cap on decision variables accepted by [`solve`].
pub const MAX_VARS: usize = 200;
/// Hard cap on constraint rows accepted by [`solve`].
pub const MAX_ROWS: usize = 1000;

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-8;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("row has {got} coefficients but the program has {expected} variables")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("program too large: {vars} variables / {rows} rows (limits {MAX_VARS} / {MAX_ROWS})")]
    SizeLimit { vars: usize, rows: usize },
    #[error("non-finite coefficient in program")]
    NonFinite,
    #[error("pivot limit exceeded; tableau is numerically stuck")]
    PivotLimit,
}

/// A minimization program over variables with optional lower bounds.
///
/// Upper bounds and `≥` rows are expressed by negating a `≤` row.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<f64>,
    eq: Vec<(Vec<f64>, f64)>,
    le: Vec<(Vec<f64>, f64)>,
    lower: Vec<Option<f64>>,
}

/// Result of a solve: status plus the optimal point when one exists.
#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    /// New program with `num_vars` variables, all bounded below by 0.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            objective: vec![0.0; num_vars],
            eq: Vec::new(),
            le: Vec::new(),
            lower: vec![Some(0.0); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.eq.len() + self.le.len()
    }

    /// Sets the objective vector (minimized).
    pub fn set_objective(&mut self, c: &[f64]) -> Result<(), LpError> {
        self.check_row(c)?;
        self.objective = c.to_vec();
        Ok(())
    }

    /// Declares variable `i` free (no lower bound).
    pub fn set_free(&mut self, i: usize) {
        self.lower[i] = None;
    }

    /// Sets a finite lower bound on variable `i`.
    pub fn set_lower(&mut self, i: usize, bound: f64) {
        self.lower[i] = Some(bound);
    }

    /// Adds `coeffs · x = rhs`.
    pub fn add_eq(&mut self, coeffs: &[f64], rhs: f64) -> Result<(), LpError> {
        self.check_row(coeffs)?;
        if !rhs.is_finite() {
            return Err(LpError::NonFinite);
        }
        self.eq.push((coeffs.to_vec(), rhs));
        Ok(())
    }

    /// Adds `coeffs · x ≤ rhs`.
    pub fn add_le(&mut self, coeffs: &[f64], rhs: f64) -> Result<(), LpError> {
        self.check_row(coeffs)?;
        if !rhs.is_finite() {
            return Err(LpError::NonFinite);
        }
        self.le.push((coeffs.to_vec(), rhs));
        Ok(())
    }

    /// Adds `coeffs · x ≥ rhs` (stored as a negated `≤` row).
    pub fn add_ge(&mut self, coeffs: &[f64], rhs: f64) -> Result<(), LpError> {
        let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
        self.add_le(&neg, -rhs)
    }

    fn check_row(&self, coeffs: &[f64]) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars {
            return Err(LpError::DimensionMismatch {
                expected: self.num_vars,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite);
        }
        Ok(())
    }
}

/// Solves the program with a two-phase dense simplex.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    if lp.num_vars > MAX_VARS || lp.num_rows() > MAX_ROWS {
        return Err(LpError::SizeLimit {
            vars: lp.num_vars,
            rows: lp.num_rows(),
        });
    }

    Tableau::build(lp).solve(lp)
}

/// One constraint row in standard form, tagged with the kind of basic
/// variable it starts with.
enum RowKind {
    Le,
    Eq,
}

struct Tableau {
    /// Row-major `(m + 1) × (cols + 1)`; last row is the reduced-cost row,
    /// last column the rhs.
    tab: Vec<f64>,
    width: usize,
    m: usize,
    cols: usize,
    basis: Vec<usize>,
    active: Vec<bool>,
    /// Standard-form column of each original variable (the positive part
    /// for free variables).
    pos_col: Vec<usize>,
    /// Negative-part column for free variables.
    neg_col: Vec<Option<usize>>,
    shift: Vec<f64>,
    first_artificial: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars;

        // Shift bounded variables to 0 and split free ones into y⁺ − y⁻.
        let mut pos_col = vec![0usize; n];
        let mut neg_col = vec![None; n];
        let mut shift = vec![0.0; n];
        let mut n_std = 0usize;
        for i in 0..n {
            pos_col[i] = n_std;
            n_std += 1;
            match lp.lower[i] {
                Some(b) => shift[i] = b,
                None => {
                    neg_col[i] = Some(n_std);
                    n_std += 1;
                }
            }
        }

        // Rows in standard variables, rhs made nonnegative.
        let mut rows: Vec<(Vec<f64>, f64, RowKind)> = Vec::with_capacity(lp.num_rows());
        let mut push_row = |coeffs: &[f64], rhs: f64, eq: bool| {
            let mut std = vec![0.0; n_std];
            let mut b = rhs;
            for i in 0..n {
                std[pos_col[i]] = coeffs[i];
                if let Some(c) = neg_col[i] {
                    std[c] = -coeffs[i];
                }
                b -= coeffs[i] * shift[i];
            }
            if eq {
                if b < 0.0 {
                    std.iter_mut().for_each(|v| *v = -*v);
                    b = -b;
                }
                rows.push((std, b, RowKind::Eq));
            } else if b < 0.0 {
                // a·y ≤ b < 0 becomes (−a)·y ≥ −b: surplus plus artificial,
                // which the Eq path with an extra surplus column handles.
                std.iter_mut().for_each(|v| *v = -*v);
                rows.push((std, -b, RowKind::Le));
            } else {
                rows.push((std, b, RowKind::Le));
            }
        };
        for (coeffs, rhs) in &lp.eq {
            push_row(coeffs, *rhs, true);
        }
        let flipped: Vec<bool> = lp
            .le
            .iter()
            .map(|(coeffs, rhs)| {
                let b = rhs - coeffs.iter().zip(&shift).map(|(c, s)| c * s).sum::<f64>();
                push_row(coeffs, *rhs, false);
                b < 0.0
            })
            .collect();

        let m = rows.len();
        // One slack or surplus column per inequality row; artificials for
        // equality rows and flipped (≥) rows.
        let n_ineq = lp.le.len();
        let n_art = lp.eq.len() + flipped.iter().filter(|f| **f).count();
        let cols = n_std + n_ineq + n_art;
        let width = cols + 1;

        let mut tab = vec![0.0; (m + 1) * width];
        let mut basis = vec![0usize; m];
        let first_artificial = n_std + n_ineq;
        let mut slack_at = n_std;
        let mut art_at = first_artificial;

        for (r, (std, b, kind)) in rows.iter().enumerate() {
            let row = &mut tab[r * width..(r + 1) * width];
            row[..n_std].copy_from_slice(std);
            row[cols] = *b;
            match kind {
                RowKind::Le => {
                    let flipped_row = flipped[r - lp.eq.len()];
                    if flipped_row {
                        row[slack_at] = -1.0; // surplus
                        row[art_at] = 1.0;
                        basis[r] = art_at;
                        art_at += 1;
                    } else {
                        row[slack_at] = 1.0;
                        basis[r] = slack_at;
                    }
                    slack_at += 1;
                }
                RowKind::Eq => {
                    row[art_at] = 1.0;
                    basis[r] = art_at;
                    art_at += 1;
                }
            }
        }

        Tableau {
            tab,
            width,
            m,
            cols,
            basis,
            active: vec![true; m],
            pos_col,
            neg_col,
            shift,
            first_artificial,
        }
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.tab[r * self.width + c]
    }

    fn cost_row_sub(&mut self, r: usize, factor: f64) {
        let (head, tail) = self.tab.split_at_mut(self.m * self.width);
        let row = &head[r * self.width..(r + 1) * self.width];
        let cost = &mut tail[..self.width];
        for (c, v) in cost.iter_mut().zip(row) {
            *c -= factor * v;
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let pv = self.tab[r * w + c];
        let inv = 1.0 / pv;
        for v in &mut self.tab[r * w..(r + 1) * w] {
            *v *= inv;
        }
        for rr in 0..=self.m {
            if rr == r {
                continue;
            }
            let f = self.tab[rr * w + c];
            if f.abs() < 1e-13 {
                continue;
            }
            for j in 0..w {
                let piv = self.tab[r * w + j];
                self.tab[rr * w + j] -= f * piv;
            }
            // Kill residue in the pivot column exactly.
            self.tab[rr * w + c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Bland iteration: returns `Ok(true)` on optimal, `Ok(false)` on
    /// unbounded.
    fn iterate(
        &mut self,
        allow: impl Fn(usize) -> bool,
        pivots: &mut usize,
    ) -> Result<bool, LpError> {
        loop {
            if *pivots >= MAX_PIVOTS {
                return Err(LpError::PivotLimit);
            }
            let cost = self.m * self.width;
            let entering = (0..self.cols)
                .find(|&j| allow(j) && self.tab[cost + j] < -PIVOT_TOL);
            let Some(entering) = entering else {
                return Ok(true);
            };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                if !self.active[r] {
                    continue;
                }
                let a = self.at(r, entering);
                if a > PIVOT_TOL {
                    let ratio = self.at(r, self.cols) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-12
                                || ((ratio - lratio).abs() <= 1e-12
                                    && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Ok(false);
            };
            self.pivot(r, entering);
            *pivots += 1;
        }
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpOutcome, LpError> {
        let mut pivots = 0usize;
        let cost_base = self.m * self.width;

        // Phase 1: minimize the sum of artificials.
        for j in self.first_artificial..self.cols {
            self.tab[cost_base + j] = 1.0;
        }
        for r in 0..self.m {
            if self.basis[r] >= self.first_artificial {
                self.cost_row_sub(r, 1.0);
            }
        }
        if !self.iterate(|_| true, &mut pivots)? {
            // Phase 1 is bounded below by 0; unbounded cannot happen.
            return Err(LpError::PivotLimit);
        }
        let phase1 = -self.tab[cost_base + self.cols];
        if phase1 > FEAS_TOL {
            return Ok(LpOutcome::Infeasible);
        }

        // Drive leftover artificials out of the basis, dropping rows that
        // turned out linearly dependent.
        for r in 0..self.m {
            if self.basis[r] < self.first_artificial {
                continue;
            }
            let col = (0..self.first_artificial).find(|&j| self.at(r, j).abs() > PIVOT_TOL);
            match col {
                Some(j) => self.pivot(r, j),
                None => self.active[r] = false,
            }
        }

        // Phase 2: the real objective over standard-form columns.
        for j in 0..self.width {
            self.tab[cost_base + j] = 0.0;
        }
        for i in 0..lp.num_vars {
            self.tab[cost_base + self.pos_col[i]] = lp.objective[i];
            if let Some(c) = self.neg_col[i] {
                self.tab[cost_base + c] = -lp.objective[i];
            }
        }
        for r in 0..self.m {
            if !self.active[r] {
                continue;
            }
            let f = self.tab[cost_base + self.basis[r]];
            if f.abs() > 1e-13 {
                self.cost_row_sub(r, f);
            }
        }
        let first_art = self.first_artificial;
        if !self.iterate(|j| j < first_art, &mut pivots)? {
            return Ok(LpOutcome::Unbounded);
        }

        // Recover the original variables.
        let mut y = vec![0.0; self.cols];
        for r in 0..self.m {
            if self.active[r] {
                y[self.basis[r]] = self.at(r, self.cols);
            }
        }
        let x: Vec<f64> = (0..lp.num_vars)
            .map(|i| {
                let neg = self.neg_col[i].map_or(0.0, |c| y[c]);
                self.shift[i] + y[self.pos_col[i]] - neg
            })
            .collect();
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        Ok(LpOutcome::Optimal { x, objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(outcome: LpOutcome) -> (Vec<f64>, f64) {
        match outcome {
            LpOutcome::Optimal { x, objective } => (x, objective),
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn min_on_simplex_edge() {
        // minimize x1 s.t. x1 + x2 = 1, x ≥ 0
        let mut lp = LinearProgram::new(2);
        lp.set_objective(&[1.0, 0.0]).unwrap();
        lp.add_eq(&[1.0, 1.0], 1.0).unwrap();
        let (x, obj) = optimal(solve(&lp).unwrap());
        assert!(obj.abs() < 1e-9);
        assert!((x[0]).abs() < 1e-9 && (x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_rows_infeasible() {
        // x1 = 1 and x1 ≤ 0.5
        let mut lp = LinearProgram::new(1);
        lp.add_eq(&[1.0], 1.0).unwrap();
        lp.add_le(&[1.0], 0.5).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(&[-1.0]).unwrap();
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variable_goes_negative() {
        // minimize t s.t. t ≥ x1 − 0.3, t ≥ 0.1 − x1 with x1 = 0 fixed:
        // t* = 0.1 at x1 = 0... instead pin x1 by equality.
        let mut lp = LinearProgram::new(2);
        lp.set_free(1);
        lp.set_objective(&[0.0, 1.0]).unwrap();
        lp.add_eq(&[1.0, 0.0], 0.2).unwrap();
        lp.add_ge(&[-1.0, 1.0], -0.3).unwrap(); // t ≥ x1 − 0.3 = −0.1
        let (x, obj) = optimal(solve(&lp).unwrap());
        assert!((x[1] + 0.1).abs() < 1e-9, "free var should reach −0.1");
        assert!((obj + 0.1).abs() < 1e-9);
    }

    #[test]
    fn duplicate_equality_rows_are_harmless() {
        let mut lp = LinearProgram::new(2);
        lp.set_objective(&[1.0, 2.0]).unwrap();
        lp.add_eq(&[1.0, 1.0], 1.0).unwrap();
        lp.add_eq(&[1.0, 1.0], 1.0).unwrap();
        lp.add_eq(&[2.0, 2.0], 2.0).unwrap();
        let (x, obj) = optimal(solve(&lp).unwrap());
        assert!((obj - 1.0).abs() < 1e-8);
        assert!((x[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn size_limits_enforced() {
        let lp = LinearProgram::new(MAX_VARS + 1);
        assert!(matches!(solve(&lp), Err(LpError::SizeLimit { .. })));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mut lp = LinearProgram::new(3);
        assert!(matches!(
            lp.add_eq(&[1.0, 1.0], 1.0),
            Err(LpError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    // --- random-program oracle: exhaustive vertex enumeration ------------

    /// Solves a k×k linear system by Gaussian elimination; `None` when
    /// singular.
    fn solve_dense(a: &mut [f64], b: &mut [f64], k: usize) -> Option<Vec<f64>> {
        for col in 0..k {
            let piv = (col..k).max_by(|&i, &j| {
                a[i * k + col].abs().partial_cmp(&a[j * k + col].abs()).unwrap()
            })?;
            if a[piv * k + col].abs() < 1e-10 {
                return None;
            }
            if piv != col {
                for j in 0..k {
                    a.swap(col * k + j, piv * k + j);
                }
                b.swap(col, piv);
            }
            for i in 0..k {
                if i == col {
                    continue;
                }
                let f = a[i * k + col] / a[col * k + col];
                if f == 0.0 {
                    continue;
                }
                for j in 0..k {
                    a[i * k + j] -= f * a[col * k + j];
                }
                b[i] -= f * b[col];
            }
        }
        Some((0..k).map(|i| b[i] / a[i * k + i]).collect())
    }

    /// Brute-force optimum over all vertices (intersections of n constraint
    /// boundaries, feasibility-checked).
    fn vertex_oracle(lp: &LinearProgram) -> Option<f64> {
        let n = lp.num_vars();
        let mut pool: Vec<(Vec<f64>, f64)> = Vec::new();
        for (c, r) in &lp.eq {
            pool.push((c.clone(), *r));
        }
        for (c, r) in &lp.le {
            pool.push((c.clone(), *r));
        }
        for i in 0..n {
            if let Some(b) = lp.lower[i] {
                let mut c = vec![0.0; n];
                c[i] = 1.0;
                pool.push((c, b));
            }
        }

        let feasible = |x: &[f64]| -> bool {
            for (c, r) in &lp.eq {
                let v: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
                if (v - r).abs() > 1e-7 {
                    return false;
                }
            }
            for (c, r) in &lp.le {
                let v: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
                if v > r + 1e-7 {
                    return false;
                }
            }
            for i in 0..n {
                if let Some(b) = lp.lower[i] {
                    if x[i] < b - 1e-7 {
                        return false;
                    }
                }
            }
            true
        };

        let mut best: Option<f64> = None;
        let mut pick = vec![0usize; n];
        fn rec(
            pool: &[(Vec<f64>, f64)],
            pick: &mut [usize],
            depth: usize,
            start: usize,
            n: usize,
            eval: &mut dyn FnMut(&[usize]),
        ) {
            if depth == n {
                eval(pick);
                return;
            }
            for i in start..pool.len() {
                pick[depth] = i;
                rec(pool, pick, depth + 1, i + 1, n, eval);
            }
        }
        rec(&pool, &mut pick, 0, 0, n, &mut |sel: &[usize]| {
            let mut a = vec![0.0; n * n];
            let mut b = vec![0.0; n];
            for (row, &idx) in sel.iter().enumerate() {
                a[row * n..(row + 1) * n].copy_from_slice(&pool[idx].0);
                b[row] = pool[idx].1;
            }
            if let Some(x) = solve_dense(&mut a, &mut b, n) {
                if feasible(&x) {
                    let obj: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
                    best = Some(best.map_or(obj, |b: f64| b.min(obj)));
                }
            }
        });
        best
    }

    #[test]
    fn random_programs_match_vertex_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let n_programs = 500;
        let mut solved = 0usize;
        for trial in 0..n_programs {
            let n = rng.random_range(2..=5);
            let n_le = rng.random_range(1..=6);
            let n_eq = rng.random_range(0..=2usize.min(n - 1));
            let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();

            let mut lp = LinearProgram::new(n);
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            lp.set_objective(&c).unwrap();
            for _ in 0..n_eq {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let rhs: f64 = row.iter().zip(&x0).map(|(a, b)| a * b).sum();
                lp.add_eq(&row, rhs).unwrap();
            }
            for _ in 0..n_le {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let rhs: f64 = row.iter().zip(&x0).map(|(a, b)| a * b).sum::<f64>()
                    + rng.random_range(0.0..1.0);
                lp.add_le(&row, rhs).unwrap();
            }
            // Box to keep everything bounded.
            for i in 0..n {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                lp.add_le(&row, 10.0).unwrap();
            }

            let oracle = vertex_oracle(&lp).expect("x0 is feasible by construction");
            let (x, obj) = optimal(solve(&lp).unwrap());
            assert!(
                (obj - oracle).abs() < 1e-7,
                "trial {trial}: simplex {obj} vs oracle {oracle}"
            );
            // The reported point must satisfy every constraint.
            for (cfs, rhs) in &lp.eq {
                let v: f64 = cfs.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert!((v - rhs).abs() < 1e-8);
            }
            for (cfs, rhs) in &lp.le {
                let v: f64 = cfs.iter().zip(&x).map(|(a, b)| a * b).sum();
                assert!(v <= rhs + 1e-8);
            }
            solved += 1;
        }
        assert_eq!(solved, n_programs);
    }

    #[test]
    fn weak_duality_spot_check() {
        // For min c·x s.t. Gx ≤ h, x ≥ 0, any μ ≥ 0 with −Gᵀμ ≤ c gives the
        // bound −h·μ ≤ optimum.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(19);
        let mut bounds_checked = 0usize;
        for _ in 0..60 {
            let n = rng.random_range(2..=4);
            let m = rng.random_range(2..=5);
            let x0: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..2.0)).collect();
            let mut lp = LinearProgram::new(n);
            // Nonnegative costs keep the program bounded below over x ≥ 0.
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            lp.set_objective(&c).unwrap();
            let mut g: Vec<Vec<f64>> = Vec::new();
            let mut h: Vec<f64> = Vec::new();
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let rhs = row.iter().zip(&x0).map(|(a, b)| a * b).sum::<f64>()
                    + rng.random_range(0.0..1.0);
                lp.add_le(&row, rhs).unwrap();
                g.push(row);
                h.push(rhs);
            }
            let (_, opt) = optimal(solve(&lp).unwrap());

            for _ in 0..50 {
                let mu: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..1.0)).collect();
                let dual_feasible = (0..n).all(|j| {
                    let gt_mu: f64 = (0..m).map(|i| g[i][j] * mu[i]).sum();
                    -gt_mu <= c[j] + 1e-12
                });
                if dual_feasible {
                    let bound: f64 = -h.iter().zip(&mu).map(|(a, b)| a * b).sum::<f64>();
                    assert!(
                        opt >= bound - 1e-7,
                        "weak duality violated: optimum {opt} < dual bound {bound}"
                    );
                    bounds_checked += 1;
                }
            }
        }
        assert!(bounds_checked > 100, "only {bounds_checked} dual-feasible samples");
    }

    #[test]
    fn deterministic_resolve() {
        let mut lp = LinearProgram::new(4);
        lp.set_objective(&[0.3, -0.2, 1.0, 0.0]).unwrap();
        lp.add_eq(&[1.0, 1.0, 1.0, 1.0], 1.0).unwrap();
        lp.add_le(&[1.0, -1.0, 0.0, 2.0], 0.4).unwrap();
        let a = solve(&lp).unwrap();
        let b = solve(&lp).unwrap();
        match (a, b) {
            (LpOutcome::Optimal { x: xa, objective: oa }, LpOutcome::Optimal { x: xb, objective: ob }) => {
                assert_eq!(xa, xb);
                assert!(oa.to_bits() == ob.to_bits());
            }
            _ => panic!("expected optimal"),
        }
    }
}
