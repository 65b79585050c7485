//! Time-to-solution benchmark over the synthetic dataset.
//!
//! Runs SA, SimCIM and SB with their default configurations on every
//! instance and prints the per-element-count summary, the same grouping a
//! TTS-versus-size chart uses. Pass a directory to also write the results
//! and summary CSVs there.
//!
//! ```bash
//! cargo run --release --example benchmark_dataset -- [out_dir]
//! ```

use std::fs::File;

use binpack_qubo::bench::{run_benchmark, write_records_csv, write_summary_csv, BenchConfig};
use binpack_qubo::dataset::{generate_dataset, DatasetSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dataset = generate_dataset(&DatasetSpec::standard(2023))?;
    let cfg = BenchConfig::default();
    println!("{} instances, {} attempts per solver\n", dataset.len(), cfg.solver.attempts);

    let report = run_benchmark(&dataset, &cfg)?;
    println!(
        "{:>3} {:>7} {:>7} {:>10} {:>14} {:>14}",
        "n", "solver", "solved", "mean θ", "TTS mean, µs", "TTS std, µs"
    );
    for s in &report.summaries {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.1}"));
        println!(
            "{:>3} {:>7} {:>4}/{:<2} {:>10.3} {:>14} {:>14}",
            s.n,
            s.solver,
            s.solved,
            s.instances,
            s.mean_theta,
            fmt(s.tts_mean_us),
            fmt(s.tts_std_us)
        );
    }

    if let Some(dir) = std::env::args().nth(1) {
        std::fs::create_dir_all(&dir)?;
        write_records_csv(File::create(format!("{dir}/results.csv"))?, &report.records)?;
        write_summary_csv(File::create(format!("{dir}/summary.csv"))?, &report.summaries)?;
        println!("\nwrote {dir}/results.csv and {dir}/summary.csv");
    }
    Ok(())
}
