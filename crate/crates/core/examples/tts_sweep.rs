//! Success probability versus annealing budget on the trivial instance.
//!
//! Longer runs succeed more often, but each run costs more; TTS weighs the
//! two. Per-attempt time is nominal here (1 µs per iteration) so the table
//! is reproducible; pass `--measured` to use wall-clock medians instead.
//!
//! ```bash
//! cargo run --release --example tts_sweep -- [sa|simcim|sb] [--measured]
//! ```

use binpack_qubo::bench::{sweep, tts, TimingMode};
use binpack_qubo::problem::ProblemInstance;
use binpack_qubo::solvers::{SolverConfig, SolverKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind: SolverKind = args
        .iter()
        .find(|a| !a.starts_with("--"))
        .map_or(Ok(SolverKind::SimulatedAnnealing), |s| s.parse())?;
    let timing = if args.iter().any(|a| a == "--measured") {
        TimingMode::Measured
    } else {
        TimingMode::PerIteration(1.0)
    };

    // two unit elements, two canisters of capacity 3: one canister suffices
    let inst = ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1)?;
    let cfg = SolverConfig {
        attempts: 1000,
        ..SolverConfig::default()
    };
    let budgets = [1, 2, 4, 8, 16, 32, 64, 128];
    let rows = sweep(&inst, 1, kind, &cfg, &budgets, timing)?;

    println!("{kind} on the trivial instance, {} attempts per budget", cfg.attempts);
    println!("{:>10} {:>8} {:>10} {:>10} {:>12}", "iterations", "θ", "t_a, µs", "R99", "TTS, µs");
    for r in &rows {
        let cell = |v: Option<f64>| v.map_or_else(|| "∞".to_string(), |x| format!("{x:.2}"));
        println!(
            "{:>10} {:>8.3} {:>10.2} {:>10} {:>12}",
            r.iterations,
            r.theta,
            r.t_a_us,
            cell(r.r99),
            cell(r.tts_us)
        );
    }

    // the same formula at a hardware annealer's fixed annealing times
    println!("\nreference points: t_a = 20, 40, 80 µs");
    for (t_a, theta) in [(20.0, 0.277), (40.0, 0.303), (80.0, 0.343)] {
        println!("  θ = {theta:.3} → TTS = {:.1} µs", tts(t_a, theta)?.unwrap());
    }
    Ok(())
}
