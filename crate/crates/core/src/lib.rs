//! # janus
//!
//! Finite-dimensional probability-update engine with two calculi side by side:
//!
//! - **Quantum**: Hermitian observables with spectral decompositions, the Born
//!   rule, Lüders (projective) state update on single and composite systems,
//!   conditional probabilities, partial-trace marginals and Schmidt analysis.
//! - **Classical**: finite Kolmogorov spaces, random variables, Bayes
//!   conditioning, product measures, independence and marginals.
//!
//! The [`harness`] module runs the two calculi against each other (EPR-Bohm
//! polarizer scenario, two-step vs. direct joint probabilities, classical
//! embedding of compatible observables, seeded Monte Carlo subensemble
//! sampling) and [`jpd`] decides whether a two-site, two-setting behavior
//! admits a joint probability distribution.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory:
//!
//! ```bash
//! cargo run -p janus --example epr_polarizers
//! cargo run -p janus --example luders_update
//! cargo run -p janus --example bayes_mirror
//! cargo run -p janus --example two_step_vs_direct
//! cargo run -p janus --example classical_embedding
//! cargo run -p janus --example joint_refinement
//! cargo run -p janus --example chsh_jpd
//! cargo run -p janus --example subensemble_sampling
//! cargo run -p janus --example spectral
//! ```
//!
//! Site indices are zero-based throughout the library (`0` is the first
//! factor of `H₁ ⊗ H₂`); the command-line surface numbers sites from 1.

#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod cli;
pub mod error;
pub mod format;
pub mod harness;
pub mod hilbert;
pub mod jpd;
pub mod quantum;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use num_complex::Complex64;
