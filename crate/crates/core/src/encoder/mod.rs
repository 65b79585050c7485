//! QUBO model of the canister-filling problem.
//!
//! [`build_qubo`] produces the penalty Hamiltonian over the variable layout
//! of [`build_layout`]; [`encode_assignment`] and [`decode_bits`] move
//! between assignments and bitstrings, and [`qubo_to_ising`] gives the spin
//! form used by the continuous solvers.

mod codec;
mod export;
mod ising;
mod layout;
mod qubo;

pub use codec::{decode_bits, encode_assignment, DecodeFailure};
pub use export::{export_qubo, parse_qubo};
pub use ising::{bits_to_spins, qubo_to_ising, spins_to_bits, IsingModel};
pub use layout::{build_layout, VariableLayout};
pub use qubo::{build_qubo, hamiltonian_terms, Encoding, HamiltonianTerms, PenaltyWeights, QuboModel};

pub(crate) use layout::bit_width;
