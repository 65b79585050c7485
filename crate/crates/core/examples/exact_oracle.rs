//! Exact optimum two ways: combinatorial search and QUBO enumeration.
//!
//! The oracle searches packings directly; brute force enumerates all 2^D
//! bitstrings of the encoded model. For a correct encoding the lowest
//! energy is A times the optimal canister count.
//!
//! ```bash
//! cargo run --release --example exact_oracle
//! ```

use binpack_qubo::encoder::{build_layout, build_qubo, decode_bits, PenaltyWeights};
use binpack_qubo::problem::{validate_assignment, ProblemInstance};
use binpack_qubo::solvers::{brute_force_bits, oracle_exact};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let instances = [
        ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1)?,
        ProblemInstance::new("three", 3, vec![1, 1, 2], 3, 1)?,
        ProblemInstance::new("tight", 3, vec![5, 3, 4, 2], 7, 1)?,
        ProblemInstance::new("min-fill", 2, vec![1, 1, 1], 3, 2)?,
    ];
    for inst in &instances {
        let sol = oracle_exact(inst)?;
        let report = validate_assignment(inst, &sol.witness)?;
        print!("{:<9} p = {:?}  oracle M = {} via {}", inst.name(), inst.p(), sol.optimal_m, sol.witness);
        assert!(report.feasible);

        let w = PenaltyWeights::default_for(inst);
        let model = build_qubo(inst, w);
        if model.dim() <= 24 {
            let (z, e) = brute_force_bits(&model)?;
            let asg = decode_bits(&build_layout(inst), &z)?;
            println!("  |  D = {:>2}, min energy {} → {}", model.dim(), e, asg);
            assert_eq!(e, w.a_weight * sol.optimal_m as f64);
        } else {
            println!("  |  D = {} too large to enumerate", model.dim());
        }
    }

    // more elements than a minimum fill allows per canister: no packing exists
    let impossible = ProblemInstance::new("impossible", 2, vec![3, 3, 3], 3, 2)?;
    println!("{}: {}", impossible.name(), oracle_exact(&impossible).unwrap_err());
    Ok(())
}
