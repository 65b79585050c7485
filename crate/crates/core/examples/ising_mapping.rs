//! The spin form used by the oscillator-based solvers.
//!
//! Substituting `z = (σ + 1) / 2` turns the QUBO into couplings `J`, fields
//! `h` and a constant. Every bitstring has the same energy in both forms.
//!
//! ```bash
//! cargo run --example ising_mapping
//! ```

use binpack_qubo::encoder::{bits_to_spins, build_qubo, qubo_to_ising, PenaltyWeights};
use binpack_qubo::problem::ProblemInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = ProblemInstance::new("three", 3, vec![1, 1, 2], 3, 1)?;
    let model = build_qubo(&inst, PenaltyWeights::default_for(&inst));
    let ising = qubo_to_ising(&model);

    println!("D = {}, QUBO offset {}, Ising offset {}", model.dim(), model.offset(), ising.offset());
    println!("fields h: {:?}", ising.h());
    println!("largest local force bound: {}", ising.force_scale());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let z: Vec<u8> = (0..model.dim()).map(|_| rng.gen_range(0..=1)).collect();
        let diff = model.energy(&z)? - ising.energy(&bits_to_spins(&z))?;
        worst = worst.max(diff.abs());
    }
    println!("max |E_qubo − E_ising| over 10 000 random bitstrings: {worst}");
    Ok(())
}
