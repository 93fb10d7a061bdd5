//! Simulation campaigns that mirror the experimental analysis: prepare a
//! (noisy) state, measure its stabilizer group with finite shots, then scan
//! the interval width `w` and the measured-subset size `m`, reporting every
//! bound evaluation as a CSV row or JSON record.
//!
//! Determinism contract: the same config and seed produce byte-identical
//! CSV. All randomness flows through per-purpose ChaCha streams derived
//! from `(seed, stream index)`, and parallel subset evaluation is pure, so
//! worker scheduling cannot perturb results.

use std::collections::HashSet;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{
    build_constraints, lower_bound, normalized_distance, uncertainty_u_c, upper_bound,
    BoundReport, BoundsError, InvalidReason, LowerBound, MeasurementRecord,
};
use crate::qsim::{
    apply_dephasing, apply_depolarizing, diagonal_distribution,
    exact_relative_entropy_coherence, expectation, fidelity, sample_computational_basis,
    sample_observable, DensityMatrix, ProbVector, PureState, QsimError,
};
use crate::stabilizer::{
    cluster_c4_generators, conjugated_generators, eigenvalue_matrix, ghz_generators,
    linear_cluster_generators, matrix_representation, w3_unitary, w4_unitary, StabilizerError,
    StabilizerSet,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown state label '{0}' (see list-states)")]
    UnknownState(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Exit code the CLI maps this error to: 2 for configuration problems,
    /// 3 for internal solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::UnknownState(_) | HarnessError::BadConfig(_) | HarnessError::Io(_) => 2,
            HarnessError::Bounds(BoundsError::Majorization(_)) => 3,
            HarnessError::Qsim(_) | HarnessError::Stabilizer(_) | HarnessError::Bounds(_) => 2,
        }
    }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    None,
    Depolarizing(f64),
    Dephasing(f64),
}

impl NoiseModel {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::None => "none",
            NoiseModel::Depolarizing(_) => "depolarizing",
            NoiseModel::Dephasing(_) => "dephasing",
        }
    }

    pub fn param(&self) -> Option<f64> {
        match self {
            NoiseModel::None => None,
            NoiseModel::Depolarizing(p) | NoiseModel::Dephasing(p) => Some(*p),
        }
    }
}

impl FromStr for NoiseModel {
    type Err = HarnessError;

    /// `none`, `depolarizing:<λ>`, or `dephasing:<γ>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "none" {
            return Ok(NoiseModel::None);
        }
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| HarnessError::BadConfig(format!("bad noise spec '{s}'")))?;
        let param: f64 = value
            .parse()
            .map_err(|_| HarnessError::BadConfig(format!("bad noise parameter '{value}'")))?;
        match kind {
            "depolarizing" => Ok(NoiseModel::Depolarizing(param)),
            "dephasing" => Ok(NoiseModel::Dephasing(param)),
            other => Err(HarnessError::BadConfig(format!("unknown noise model '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(HarnessError::BadConfig(format!("unknown format '{other}'"))),
        }
    }
}

/// Campaign configuration; the JSON config file mirrors these field names
/// and CLI flags override file values.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub state: String,
    pub noise: NoiseModel,
    /// Shots per measurement setting (per Pauli term for weighted sums).
    pub shots: u64,
    /// Bypass sampling entirely: exact expectations, exact diagonal.
    pub exact: bool,
    pub w_values: Vec<f64>,
    /// Subset sizes `[lo, hi]` for the subset scan; defaults to the full
    /// range `1..=2^n − 1`.
    pub m_range: Option<(usize, usize)>,
    /// Enumerate all subsets of a size when their count is at most this.
    pub exhaustive_threshold: usize,
    /// Otherwise sample this many distinct subsets uniformly.
    pub sample_count: usize,
    pub bootstrap_resamples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            state: String::new(),
            noise: NoiseModel::None,
            shots: 10_000,
            exact: false,
            w_values: vec![3.0],
            m_range: None,
            exhaustive_threshold: 5000,
            sample_count: 5000,
            bootstrap_resamples: 1000,
            seed: 1,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn for_state(label: &str) -> Self {
        Self {
            state: label.to_string(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        state_qubits(&self.state)?;
        if !self.exact && self.shots < 2 {
            return Err(HarnessError::BadConfig(format!(
                "shots = {} but sampling needs at least 2 (or use exact mode)",
                self.shots
            )));
        }
        if self.w_values.is_empty() {
            return Err(HarnessError::BadConfig("w list is empty".into()));
        }
        if let Some(bad) = self.w_values.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(HarnessError::BadConfig(format!("bad w value {bad}")));
        }
        if let Some(p) = self.noise.param() {
            if !(0.0..=1.0).contains(&p) {
                return Err(HarnessError::BadConfig(format!(
                    "noise parameter {p} outside [0, 1]"
                )));
            }
        }
        if self.bootstrap_resamples < 100 {
            return Err(HarnessError::BadConfig(
                "bootstrap_resamples must be at least 100".into(),
            ));
        }
        if let Some((lo, hi)) = self.m_range {
            let max_m = (1usize << state_qubits(&self.state)?) - 1;
            if lo < 1 || lo > hi || hi > max_m {
                return Err(HarnessError::BadConfig(format!(
                    "m range {lo}..{hi} outside 1..{max_m}"
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// State registry
// ---------------------------------------------------------------------------

const NAMED_STATES: [&str; 6] = ["bell", "ghz3", "ghz4", "c4", "w3", "w4"];

/// All registry labels, including the generic linear-cluster family.
pub fn list_states() -> Vec<String> {
    let mut labels: Vec<String> = NAMED_STATES.iter().map(|s| s.to_string()).collect();
    for n in 2..=6 {
        labels.push(format!("cluster-{n}"));
    }
    labels
}

fn cluster_label_qubits(label: &str) -> Option<usize> {
    let n: usize = label.strip_prefix("cluster-")?.parse().ok()?;
    (2..=6).contains(&n).then_some(n)
}

pub fn state_qubits(label: &str) -> Result<usize, HarnessError> {
    match label {
        "bell" => Ok(2),
        "ghz3" | "w3" => Ok(3),
        "ghz4" | "c4" | "w4" => Ok(4),
        other => cluster_label_qubits(other)
            .ok_or_else(|| HarnessError::UnknownState(label.to_string())),
    }
}

/// The ideal pure state, assembled from its printed amplitudes (the
/// cluster family is built as the joint +1 eigenstate of its generators).
pub fn ideal_state(label: &str) -> Result<PureState, HarnessError> {
    let one = C64::new(1.0, 0.0);
    let state = match label {
        "bell" => PureState::from_sparse(2, &[(0b00, one), (0b11, one)])?,
        "ghz3" => PureState::from_sparse(3, &[(0b000, one), (0b111, one)])?,
        "ghz4" => PureState::from_sparse(4, &[(0b0000, one), (0b1111, one)])?,
        "c4" => PureState::from_sparse(
            4,
            &[(0b0000, one), (0b0011, one), (0b1100, one), (0b1111, -one)],
        )?,
        "w3" => PureState::from_sparse(3, &[(0b100, one), (0b010, one), (0b001, one)])?,
        "w4" => PureState::from_sparse(
            4,
            &[(0b0001, one), (0b0010, one), (0b0100, one), (0b1000, one)],
        )?,
        other => {
            let n = cluster_label_qubits(other)
                .ok_or_else(|| HarnessError::UnknownState(label.to_string()))?;
            stabilizer_eigenstate(&linear_cluster_generators(n)?)
        }
    };
    Ok(state)
}

/// The stabilizer group of a registry state.
pub fn stabilizer_set(label: &str) -> Result<StabilizerSet, HarnessError> {
    let set = match label {
        "bell" => ghz_generators(2)?,
        "ghz3" => ghz_generators(3)?,
        "ghz4" => ghz_generators(4)?,
        "c4" => cluster_c4_generators(),
        "w3" => conjugated_generators(&w3_unitary(), 3)?,
        "w4" => {
            // The conventional W₄ generator labels run against the qubit
            // order of the conjugated Z's; relabel to match.
            let conjugated = conjugated_generators(&w4_unitary(), 4)?;
            let mut generators = conjugated.generators().to_vec();
            generators.reverse();
            StabilizerSet::from_generators(4, generators)?
        }
        other => {
            let n = cluster_label_qubits(other)
                .ok_or_else(|| HarnessError::UnknownState(label.to_string()))?;
            linear_cluster_generators(n)?
        }
    };
    Ok(set)
}

/// Ideal state with the configured noise channel applied.
pub fn prepare_state(label: &str, noise: &NoiseModel) -> Result<DensityMatrix, HarnessError> {
    let rho = DensityMatrix::from_pure(&ideal_state(label)?);
    let noisy = match noise {
        NoiseModel::None => rho,
        NoiseModel::Depolarizing(lambda) => apply_depolarizing(&rho, *lambda)?,
        NoiseModel::Dephasing(gamma) => apply_dephasing(&rho, *gamma)?,
    };
    Ok(noisy)
}

/// Unique joint +1 eigenstate of a stabilizer group, extracted from the
/// rank-1 projector `2^{-n} Σ_T S_T`. The global phase is fixed by making
/// the first sizable amplitude real positive.
fn stabilizer_eigenstate(set: &StabilizerSet) -> PureState {
    let n = set.n();
    let dim = 1usize << n;
    let mut proj = vec![C64::new(0.0, 0.0); dim * dim];
    for t in 0..set.num_elements() {
        let m = matrix_representation(set.element(t));
        for (p, v) in proj.iter_mut().zip(m) {
            *p += v;
        }
    }
    let scale = 1.0 / dim as f64;
    let mut best = 0usize;
    let mut best_norm = -1.0;
    for j in 0..dim {
        let norm: f64 = (0..dim).map(|i| (proj[i * dim + j] * scale).norm_sqr()).sum();
        if norm > best_norm + 1e-12 {
            best = j;
            best_norm = norm;
        }
    }
    let mut amps: Vec<C64> = (0..dim).map(|i| proj[i * dim + best] * scale).collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    let lead = amps
        .iter()
        .find(|a| a.norm() > 1e-9)
        .expect("projector column is nonzero");
    let phase = lead / lead.norm();
    for a in amps.iter_mut() {
        *a *= phase.conj();
    }
    PureState::new(n, amps).expect("projector column is a unit eigenvector")
}

/// Bisects the channel parameter until the prepared state hits the target
/// fidelity within 1e-4. Fidelity is monotone decreasing in the parameter
/// for both channels.
pub fn calibrate_noise(
    label: &str,
    kind: fn(f64) -> NoiseModel,
    target_fidelity: f64,
) -> Result<f64, HarnessError> {
    let ideal = ideal_state(label)?;
    let f_of = |p: f64| -> Result<f64, HarnessError> {
        Ok(fidelity(&prepare_state(label, &kind(p))?, &ideal))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if target_fidelity > f_of(lo)? + 1e-4 || target_fidelity < f_of(hi)? - 1e-4 {
        return Err(HarnessError::BadConfig(format!(
            "target fidelity {target_fidelity} unreachable for {label}"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let f = f_of(mid)?;
        if (f - target_fidelity).abs() <= 1e-4 {
            return Ok(mid);
        }
        if f > target_fidelity {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Simulates one record per requested group element. The identity element
/// is always included (mean 1, sigma 0) and never re-measured, whether or
/// not `subsets` lists it.
pub fn measure_stabilizers(
    rho: &DensityMatrix,
    set: &StabilizerSet,
    subsets: &[usize],
    shots: u64,
    rng: &mut impl Rng,
) -> Result<Vec<MeasurementRecord>, HarnessError> {
    let mut records = vec![MeasurementRecord::identity()];
    for &t in subsets {
        if t == 0 {
            continue;
        }
        let (mean, sigma) = sample_observable(rho, set.element(t), shots, rng)?;
        records.push(MeasurementRecord::new(t, mean, sigma, shots));
    }
    Ok(records)
}

/// Exact-expectation records (sigma 0): the infinite-shot limit.
pub fn exact_stabilizer_records(
    rho: &DensityMatrix,
    set: &StabilizerSet,
    subsets: &[usize],
) -> Result<Vec<MeasurementRecord>, HarnessError> {
    let mut records = vec![MeasurementRecord::identity()];
    for &t in subsets {
        if t == 0 {
            continue;
        }
        let mean = expectation(rho, set.element(t))?;
        records.push(MeasurementRecord::new(t, mean, 0.0, 0));
    }
    Ok(records)
}

// ---------------------------------------------------------------------------
// Campaign plumbing shared by the run modes
// ---------------------------------------------------------------------------

struct Campaign {
    set: StabilizerSet,
    b: crate::stabilizer::EigenvalueMatrix,
    ideal_fidelity: f64,
    records: Vec<MeasurementRecord>,
    d: ProbVector,
    u_c: f64,
    u_c_sigma: Option<f64>,
    c_re: f64,
    /// Largest single-record standard error; bound-violation events are
    /// counted against `c_re + 3 ×` this.
    stat_tolerance: f64,
}

impl Campaign {
    fn prepare(config: &ExperimentConfig) -> Result<Self, HarnessError> {
        config.validate()?;
        let set = stabilizer_set(&config.state)?;
        let b = eigenvalue_matrix(set.n())?;
        let ideal = ideal_state(&config.state)?;
        let rho = prepare_state(&config.state, &config.noise)?;
        let all: Vec<usize> = (1..set.num_elements()).collect();

        let (records, d, u_c_sigma) = if config.exact {
            let records = exact_stabilizer_records(&rho, &set, &all)?;
            (records, diagonal_distribution(&rho), Some(0.0))
        } else {
            let mut rng_obs = stream_rng(config.seed, 0);
            let records = measure_stabilizers(&rho, &set, &all, config.shots, &mut rng_obs)?;
            let mut rng_basis = stream_rng(config.seed, 1);
            let sample = sample_computational_basis(&rho, config.shots, &mut rng_basis)?;
            let mut rng_boot = stream_rng(config.seed, 2);
            let sigma = uncertainty_u_c(
                &sample.counts,
                config.shots,
                config.bootstrap_resamples,
                &mut rng_boot,
            )?;
            (records, sample.probs, Some(sigma))
        };

        let u_c = upper_bound(&d);
        let c_re = exact_relative_entropy_coherence(&rho);
        let stat_tolerance = records.iter().map(|r| r.sigma).fold(0.0, f64::max);
        Ok(Self {
            ideal_fidelity: fidelity(&rho, &ideal),
            set,
            b,
            records,
            d,
            u_c,
            u_c_sigma,
            c_re,
            stat_tolerance,
        })
    }

    fn record_for(&self, t: usize) -> MeasurementRecord {
        // records[0] is the identity; element T sits at index T.
        self.records[t]
    }

    fn evaluate(
        &self,
        config: &ExperimentConfig,
        w: f64,
        subset: &[usize],
    ) -> Result<BoundReport, HarnessError> {
        let start = Instant::now();
        let mut records = vec![MeasurementRecord::identity()];
        let mut mask = 0u64;
        for &t in subset {
            records.push(self.record_for(t));
            mask |= 1u64 << t;
        }
        let cs = build_constraints(&records, w, &self.b)?;
        let l_c = lower_bound(&self.d, &cs)?;
        let distance = match l_c.value() {
            Some(l) if self.c_re > 0.0 => Some(normalized_distance(self.c_re, l)?),
            _ => None,
        };
        Ok(BoundReport {
            state: config.state.clone(),
            n: self.set.n(),
            w,
            subset_mask: mask,
            m: subset.len(),
            l_c,
            u_c: self.u_c,
            u_c_sigma: self.u_c_sigma,
            c_re_exact: Some(self.c_re),
            distance,
            fidelity: Some(self.ideal_fidelity),
            elapsed_micros: start.elapsed().as_micros() as u64,
        })
    }

    fn violates_bound(&self, report: &BoundReport) -> bool {
        match report.l_c.value() {
            Some(l) => l > self.c_re + 3.0 * self.stat_tolerance + 1e-9,
            None => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Scan outputs
// ---------------------------------------------------------------------------

/// Per-key aggregate of a scan (key = w for w-scans, m for subset scans).
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub key: f64,
    pub tried: usize,
    pub valid: usize,
    pub pct_valid: f64,
    /// Mean normalized distance over valid solutions.
    pub mean_distance: Option<f64>,
    /// Sample standard deviation of the distance over valid solutions.
    pub distance_std: Option<f64>,
    pub mean_l_c: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSummary {
    /// `"w"` or `"m"`.
    pub axis: &'static str,
    pub rows: Vec<ScanRow>,
    /// Count of valid results with `l_c > C_RE + 3·(max record sigma)`;
    /// reported, never hidden.
    pub bound_violations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOutcome {
    pub reports: Vec<BoundReport>,
    pub summary: ScanSummary,
}

fn summarize(axis: &'static str, groups: Vec<(f64, Vec<&BoundReport>)>, violations: usize) -> ScanSummary {
    let rows = groups
        .into_iter()
        .map(|(key, reports)| {
            let tried = reports.len();
            let valids: Vec<&BoundReport> = reports.iter().copied().filter(|r| r.l_c.is_valid()).collect();
            let valid = valids.len();
            let distances: Vec<f64> = valids.iter().filter_map(|r| r.distance).collect();
            let mean_distance = if distances.is_empty() {
                None
            } else {
                Some(distances.iter().sum::<f64>() / distances.len() as f64)
            };
            let distance_std = if distances.len() >= 2 {
                let mean = mean_distance.expect("nonempty");
                let var = distances.iter().map(|d| (d - mean).powi(2)).sum::<f64>()
                    / (distances.len() as f64 - 1.0);
                Some(var.sqrt())
            } else {
                None
            };
            let mean_l_c = if valid == 0 {
                None
            } else {
                Some(
                    valids.iter().filter_map(|r| r.l_c.value()).sum::<f64>() / valid as f64,
                )
            };
            ScanRow {
                key,
                tried,
                valid,
                pct_valid: valid as f64 / tried as f64,
                mean_distance,
                distance_std,
                mean_l_c,
            }
        })
        .collect();
    ScanSummary { axis, rows, bound_violations: violations }
}

// ---------------------------------------------------------------------------
// Run modes
// ---------------------------------------------------------------------------

/// Full-group evaluation at the first configured `w`: the headline
/// `l_c ≤ C_RE ≤ u_c` report for one prepared state.
pub fn run_full(config: &ExperimentConfig) -> Result<BoundReport, HarnessError> {
    let campaign = Campaign::prepare(config)?;
    let all: Vec<usize> = (1..campaign.set.num_elements()).collect();
    let w = config.w_values.first().copied().expect("validated nonempty");
    campaign.evaluate(config, w, &all)
}

/// One full-group evaluation per configured `w`, on a single shared
/// measurement record set.
pub fn run_w_scan(config: &ExperimentConfig) -> Result<ScanOutcome, HarnessError> {
    let campaign = Campaign::prepare(config)?;
    let all: Vec<usize> = (1..campaign.set.num_elements()).collect();
    let reports: Vec<BoundReport> = config
        .w_values
        .iter()
        .map(|&w| campaign.evaluate(config, w, &all))
        .collect::<Result<_, _>>()?;
    let violations = reports.iter().filter(|r| campaign.violates_bound(r)).count();
    let groups = reports
        .iter()
        .map(|r| (r.w, vec![r]))
        .collect::<Vec<_>>();
    let summary = summarize("w", groups, violations);
    Ok(ScanOutcome {
        summary,
        reports,
    })
}

/// For each subset size `m`, evaluates `l_c` on subsets of the non-identity
/// group elements (exhaustively when there are at most
/// `exhaustive_threshold`, otherwise `sample_count` distinct uniform
/// samples), all at the first configured `w`.
pub fn run_subset_scan(config: &ExperimentConfig) -> Result<ScanOutcome, HarnessError> {
    let campaign = Campaign::prepare(config)?;
    let n_elements = campaign.set.num_elements() - 1;
    let (m_lo, m_hi) = config.m_range.unwrap_or((1, n_elements));
    let w = config.w_values.first().copied().expect("validated nonempty");

    let mut all_reports: Vec<BoundReport> = Vec::new();
    let mut groups: Vec<(f64, std::ops::Range<usize>)> = Vec::new();
    for m in m_lo..=m_hi {
        let mut rng = stream_rng(config.seed, 16 + m as u64);
        let subsets = choose_subsets(
            n_elements,
            m,
            config.exhaustive_threshold,
            config.sample_count,
            &mut rng,
        );
        let start = all_reports.len();
        let mut reports = subsets
            .par_iter()
            .map(|subset| campaign.evaluate(config, w, subset))
            .collect::<Result<Vec<_>, _>>()?;
        all_reports.append(&mut reports);
        groups.push((m as f64, start..all_reports.len()));
    }

    let violations = all_reports
        .iter()
        .filter(|r| campaign.violates_bound(r))
        .count();
    let grouped: Vec<(f64, Vec<&BoundReport>)> = groups
        .into_iter()
        .map(|(key, range)| (key, all_reports[range].iter().collect()))
        .collect();
    let summary = summarize("m", grouped, violations);
    Ok(ScanOutcome {
        reports: all_reports,
        summary,
    })
}

/// Subsets of `{1, …, n_elements}` of size `m`, as sorted index lists in a
/// deterministic order.
fn choose_subsets(
    n_elements: usize,
    m: usize,
    exhaustive_threshold: usize,
    sample_count: usize,
    rng: &mut impl Rng,
) -> Vec<Vec<usize>> {
    let total = binomial_capped(n_elements, m, exhaustive_threshold);
    if total <= exhaustive_threshold {
        let mut out = Vec::with_capacity(total);
        let mut current = Vec::with_capacity(m);
        enumerate_combinations(1, n_elements, m, &mut current, &mut out);
        return out;
    }

    // Uniform sampling without replacement over subsets: draw m distinct
    // elements by partial Fisher–Yates, retry on repeated subsets.
    let mut seen: HashSet<u64> = HashSet::with_capacity(sample_count);
    let mut out = Vec::with_capacity(sample_count);
    let mut pool: Vec<usize> = (1..=n_elements).collect();
    while out.len() < sample_count {
        for i in 0..m {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut subset: Vec<usize> = pool[..m].to_vec();
        subset.sort_unstable();
        let mask = subset.iter().fold(0u64, |acc, &t| acc | (1u64 << t));
        if seen.insert(mask) {
            out.push(subset);
        }
    }
    out
}

fn enumerate_combinations(
    from: usize,
    to: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for t in from..=(to + 1 - remaining) {
        current.push(t);
        enumerate_combinations(t + 1, to, remaining - 1, current, out);
        current.pop();
    }
}

/// `C(n, k)` saturated just above `cap` so huge counts never overflow.
fn binomial_capped(n: usize, k: usize, cap: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > (cap as u128 + 1) {
            return cap + 1;
        }
    }
    acc as usize
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

pub fn csv_header() -> &'static str {
    "state,n,noise,param,shots,w,m,subset_mask_hex,valid,invalid_reason,l_c,u_c,u_c_sigma,c_re_exact,distance_D,fidelity,seed"
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn csv_row(config: &ExperimentConfig, r: &BoundReport) -> String {
    let param = opt_f64(config.noise.param());
    let shots = if config.exact {
        String::new()
    } else {
        config.shots.to_string()
    };
    let (valid, reason, l_c) = match r.l_c {
        LowerBound::Valid(v) => ("true", "", v.to_string()),
        LowerBound::Invalid(InvalidReason::NoSolution) => ("false", "no_solution", String::new()),
        LowerBound::Invalid(InvalidReason::NonPositive) => ("false", "non_positive", String::new()),
    };
    format!(
        "{},{},{},{},{},{},{},{:x},{},{},{},{},{},{},{},{},{}",
        r.state,
        r.n,
        config.noise.name(),
        param,
        shots,
        r.w,
        r.m,
        r.subset_mask,
        valid,
        reason,
        l_c,
        r.u_c,
        opt_f64(r.u_c_sigma),
        opt_f64(r.c_re_exact),
        opt_f64(r.distance),
        opt_f64(r.fidelity),
        config.seed,
    )
}

/// Full CSV document: header plus one row per report, `\n` separated.
pub fn to_csv(config: &ExperimentConfig, reports: &[BoundReport]) -> String {
    let mut out = String::from(csv_header());
    out.push('\n');
    for r in reports {
        out.push_str(&csv_row(config, r));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a ExperimentConfig,
    reports: &'a [BoundReport],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a ScanSummary>,
}

pub fn to_json(
    config: &ExperimentConfig,
    reports: &[BoundReport],
    summary: Option<&ScanSummary>,
) -> String {
    serde_json::to_string_pretty(&JsonDocument { config, reports, summary })
        .expect("reports serialize")
}
