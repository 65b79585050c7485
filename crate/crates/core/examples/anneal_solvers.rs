//! Minimize one instance's QUBO with each heuristic and re-check the answer.
//!
//! Every solver returns its lowest-energy bitstring; the decoded packing is
//! validated against the original constraints rather than trusted.
//!
//! ```bash
//! cargo run --release --example anneal_solvers -- [seed]
//! ```

use binpack_qubo::bench::is_success;
use binpack_qubo::encoder::{build_layout, build_qubo, decode_bits, PenaltyWeights};
use binpack_qubo::problem::{validate_assignment, ProblemInstance};
use binpack_qubo::solvers::{oracle_exact, SolverConfig, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map_or(Ok(7), |s| s.parse())?;
    let inst = ProblemInstance::new("n06", 3, vec![3, 3, 5, 1, 3, 3], 15, 1)?;
    let optimum = oracle_exact(&inst)?.optimal_m;
    let model = build_qubo(&inst, PenaltyWeights::default_for(&inst));
    let layout = build_layout(&inst);
    let cfg = SolverConfig { seed, ..SolverConfig::default() };
    println!("{}: p = {:?}, D = {}, optimum M = {optimum}\n", inst.name(), inst.p(), model.dim());

    for kind in SolverKind::ALL {
        let result = kind.solve(&model, &cfg)?;
        let hits = result
            .per_attempt
            .iter()
            .filter(|a| is_success(&inst, &a.bits, optimum))
            .count();
        print!("{kind:>6}: best energy {:>4}, θ = {:.2}", result.best_energy, hits as f64 / cfg.attempts as f64);
        match decode_bits(&layout, &result.best_bits) {
            Ok(asg) => {
                let report = validate_assignment(&inst, &asg)?;
                println!(", {asg} feasible={} M={}", report.feasible, report.objective_m);
            }
            Err(e) => println!(", undecodable: {e}"),
        }
    }
    Ok(())
}
