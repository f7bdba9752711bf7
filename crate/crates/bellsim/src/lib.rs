//! A desk-scale laboratory for the Bell/CHSH experiment.
//!
//! Everything here runs on a laptop in seconds: exact quantum predictions for
//! the spin singlet, local hidden-variable (LHV) baselines that cannot beat
//! |S| = 2, a trial generator with on-disk replay, setting-conditioned
//! statistics, and finite symmetry models for reasoning about which settings
//! are "the same experiment in disguise".
//!
//! # Tour (each is a runnable example)
//!
//! Closed-form theory:
//! ```text
//! cargo run --example chsh_theory
//! ```
//! Simulated quantum violation with conditioned analysis:
//! ```text
//! cargo run --example quantum_violation
//! ```
//! The classical ceiling, enumerated and sampled:
//! ```text
//! cargo run --example lhv_baseline
//! ```
//! The two-particle spin-dot operator and its spectrum:
//! ```text
//! cargo run --example spin_dot_spectrum
//! ```
//! Coherent states on a sphere grid, operator reconstruction, rotation
//! covariance:
//! ```text
//! cargo run --example coherent_states
//! ```
//! Finite group actions, permissibility, and relatedness of variables:
//! ```text
//! cargo run --example relatedness
//! ```
//!
//! The same capabilities are scriptable through the thin `bellsim` binary
//! (`simulate`, `analyze`, `theory`, `lhv-bound`, `spectrum`, `coherent`,
//! `relate`); see the README for the file formats it reads and writes.
//!
//! # Module map
//!
//! - [`linalg`]: 2- and 4-dimensional complex matrices, tensor products, and
//!   a Hermitian eigensolver sized for exactly this problem.
//! - [`spin`]: directions, Pauli operators, the singlet, spin coherent
//!   states, and grid integrals over the sphere.
//! - [`born`]: closed-form outcome laws and the CHSH functional.
//! - [`lhv`]: deterministic strategies and hidden-variable models.
//! - [`experiment`]: trial generation, config files, and the trials CSV.
//! - [`analysis`]: setting-conditioned estimates, S with its standard error,
//!   and no-signalling diagnostics.
//! - [`groups`]: finite actions, permissible variables, induced groups, and
//!   relatedness (η = θ∘k).
//! - [`rng`]: the counter-based generator every stochastic path derives from.
//!
//! Outcomes are written `±1` throughout, and angles are radians inside the
//! library; degrees appear only at the CLI and config-file boundary.

pub mod analysis;
pub mod born;
pub mod experiment;
pub mod groups;
pub mod lhv;
pub mod linalg;
pub mod rng;
pub mod spin;

pub use analysis::{evaluate_report, AnalysisReport, ConditionalEstimate};
pub use born::{chsh_theory, correlation_theory, AngleSettings};
pub use experiment::{run_experiment, ExperimentConfig, TrialRecord};
pub use groups::{are_related, is_permissible, FiniteAction, LabeledVariable};
pub use linalg::{hermitian_eigen, tensor, ComplexMatrix, EigenSystem, StateVector};
pub use spin::{singlet_state, spin_dot_operator, spin_operator, Direction};
