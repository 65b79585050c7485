//! Canister-filling bin packing as quadratic unconstrained binary optimization.
//!
//! The pipeline runs [`problem`] → [`encoder`] → [`solvers`] → [`bench`]:
//! describe an instance, build its QUBO, minimize it with an exact or
//! heuristic solver, decode and re-validate the result, and estimate
//! time-to-solution. [`dataset`] regenerates the synthetic benchmark family,
//! and [`cli`] backs the `binpack-qubo` binary.
//!
//! Runnable walkthroughs, one per stage (`cargo run --release --example <name>`):
//!
//! - `check_assignment` — feasibility reports for hand-written packings
//! - `encode_trivial` — layout, energies and export of the smallest model
//! - `exact_oracle` — combinatorial optimum vs. exhaustive QUBO minimum
//! - `ising_mapping` — the spin form used by the oscillator solvers
//! - `anneal_solvers` — SA, SimCIM and SB on one instance, re-validated
//! - `generate_dataset` — the oracle-certified benchmark family on disk
//! - `tts_sweep` — success probability and TTS across annealing budgets
//! - `benchmark_dataset` — per-size TTS statistics for every solver

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod encoder;
pub mod problem;
pub mod solvers;

pub use error::{Error, Result};
