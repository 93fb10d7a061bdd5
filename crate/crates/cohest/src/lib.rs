//! Bounds on the relative entropy of coherence of stabilizer-type states
//! from a small number of (simulated) stabilizer measurements.
//!
//! The pipeline: a density-matrix simulator stands in for the experiment
//! ([`qsim`]), stabilizer groups supply the measured observables and the
//! ±1 eigenvalue matrix ([`stabilizer`]), measured expectations become
//! interval constraints on a probability polytope whose majorization meet
//! yields a lower bound on the coherence ([`majorization`], [`bounds`]),
//! and a single computational-basis measurement yields the upper bound.
//! [`harness`] reproduces the full analysis campaigns (w-scans, subset
//! scans) and owns the CLI-facing configuration and report formats.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod harness;
pub(crate) mod linalg;
pub mod lp;
pub mod majorization;
pub mod qsim;
pub mod sio;
pub mod stabilizer;

pub use bounds::{BoundReport, LowerBound, MeasurementRecord};
pub use qsim::{DensityMatrix, ProbVector, PureState};
pub use stabilizer::{ObservableSum, PauliString, StabilizerSet};
