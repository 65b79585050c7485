//! Time-to-solution benchmarking.
//!
//! An attempt counts as a success only if its bitstring decodes to a
//! feasible assignment using exactly the known optimal number of canisters.
//! With success probability `θ` and per-attempt time `t_a`,
//!
//! ```text
//! R99 = ln(1 − 0.99) / ln(1 − θ)        TTS = t_a · R99
//! ```
//!
//! `R99` stays real-valued. `θ = 0` has no finite `R99`; that case is
//! represented as `None` throughout.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::encoder::{build_qubo, decode_bits, PenaltyWeights};
use crate::error::{Error, Result};
use crate::problem::{validate_assignment, ProblemInstance};
use crate::solvers::{SolveResult, SolverConfig, SolverKind};

pub const TARGET_PROBABILITY: f64 = 0.99;

/// Repetitions needed to see at least one success with probability 0.99.
///
/// `θ = 1` gives exactly 1; `θ = 0` gives `None`.
pub fn r99(theta: f64) -> Result<Option<f64>> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::input(format!("success probability {theta} outside [0, 1]")));
    }
    if theta == 0.0 {
        return Ok(None);
    }
    if theta == 1.0 {
        return Ok(Some(1.0));
    }
    Ok(Some((1.0 - TARGET_PROBABILITY).ln() / (1.0 - theta).ln()))
}

/// `t_a · R99(θ)` in the units of `t_a`.
pub fn tts(t_a: f64, theta: f64) -> Result<Option<f64>> {
    if !(t_a > 0.0 && t_a.is_finite()) {
        return Err(Error::input(format!("per-attempt time {t_a} must be positive")));
    }
    Ok(r99(theta)?.map(|r| t_a * r))
}

/// How `t_a` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimingMode {
    /// Median measured wall time per attempt.
    Measured,
    /// A fixed nominal per-attempt time in microseconds.
    Fixed(f64),
    /// Nominal microseconds per iteration, so `t_a` scales with the budget.
    PerIteration(f64),
}

impl TimingMode {
    fn t_a_us(&self, result: &SolveResult, iterations: usize) -> f64 {
        match *self {
            TimingMode::Fixed(us) => us,
            TimingMode::PerIteration(us) => us * iterations as f64,
            TimingMode::Measured => {
                let mut times: Vec<f64> = result.per_attempt.iter().map(|a| a.wall_time * 1e6).collect();
                times.sort_by(f64::total_cmp);
                let mid = times.len() / 2;
                let median = if times.len() % 2 == 1 {
                    times[mid]
                } else {
                    0.5 * (times[mid - 1] + times[mid])
                };
                // a clock tick below resolution still took some time
                median.max(1e-3)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            TimingMode::Fixed(v) | TimingMode::PerIteration(v) if !(v > 0.0 && v.is_finite()) => {
                Err(Error::input(format!("nominal time {v} must be positive")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub solvers: Vec<SolverKind>,
    pub solver: SolverConfig,
    pub timing: TimingMode,
    /// `None` uses [`PenaltyWeights::default_for`] per instance.
    pub weights: Option<PenaltyWeights>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            solvers: SolverKind::ALL.to_vec(),
            solver: SolverConfig::default(),
            timing: TimingMode::Measured,
            weights: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub n: usize,
    pub solver: SolverKind,
    pub seed: u64,
    pub attempts: usize,
    pub successes: usize,
    pub theta: f64,
    /// `(successes + 1) / (attempts + 2)`, never 0 or 1.
    pub theta_smoothed: f64,
    pub t_a_us: f64,
    pub r99: Option<f64>,
    pub tts_us: Option<f64>,
    /// Canisters used by the lowest-energy attempt, if it decodes.
    pub best_m: Option<usize>,
    pub feasible: bool,
    pub wall_total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub n: usize,
    pub solver: SolverKind,
    pub instances: usize,
    /// Instances with at least one successful attempt.
    pub solved: usize,
    pub success_rate: f64,
    /// Mean per-attempt success probability over the group.
    pub mean_theta: f64,
    /// Over solved instances only.
    pub tts_mean_us: Option<f64>,
    /// Sample standard deviation over solved instances; needs two of them.
    pub tts_std_us: Option<f64>,
}

impl BenchSummary {
    pub fn unsolved(&self) -> usize {
        self.instances - self.solved
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summaries: Vec<BenchSummary>,
}

/// Whether a bitstring is a feasible packing with exactly `optimum` canisters.
pub fn is_success(inst: &ProblemInstance, bits: &[u8], optimum: usize) -> bool {
    let layout = crate::encoder::build_layout(inst);
    match decode_bits(&layout, bits) {
        Ok(asg) => validate_assignment(inst, &asg)
            .map(|r| r.feasible && r.objective_m == optimum)
            .unwrap_or(false),
        Err(_) => false,
    }
}

/// Solves one instance and condenses the attempts into a record.
pub fn bench_instance(
    inst: &ProblemInstance,
    optimum: usize,
    kind: SolverKind,
    solver_cfg: &SolverConfig,
    timing: TimingMode,
    weights: Option<PenaltyWeights>,
) -> Result<BenchRecord> {
    timing.validate()?;
    let weights = weights.unwrap_or_else(|| PenaltyWeights::default_for(inst));
    let model = build_qubo(inst, weights);
    let result = kind.solve(&model, solver_cfg)?;

    let successes = result
        .per_attempt
        .iter()
        .filter(|a| is_success(inst, &a.bits, optimum))
        .count();
    let attempts = result.per_attempt.len();
    let theta = successes as f64 / attempts as f64;
    let t_a_us = timing.t_a_us(&result, solver_cfg.iterations);

    let layout = crate::encoder::build_layout(inst);
    let (best_m, feasible) = match decode_bits(&layout, &result.best_bits) {
        Ok(asg) => {
            let r = validate_assignment(inst, &asg)?;
            (Some(r.objective_m), r.feasible)
        }
        Err(_) => (None, false),
    };

    Ok(BenchRecord {
        instance: inst.name().to_string(),
        n: inst.n(),
        solver: kind,
        seed: solver_cfg.seed,
        attempts,
        successes,
        theta,
        theta_smoothed: (successes as f64 + 1.0) / (attempts as f64 + 2.0),
        t_a_us,
        r99: r99(theta)?,
        tts_us: tts(t_a_us, theta)?,
        best_m,
        feasible,
        wall_total_s: result.wall_time_total,
    })
}

/// Runs every configured solver on every instance and groups results by element count.
///
/// Instance/solver pairs run in parallel; records come back in dataset
/// order, solvers in configured order within an instance.
pub fn run_benchmark(dataset: &Dataset, cfg: &BenchConfig) -> Result<BenchReport> {
    if dataset.is_empty() {
        return Err(Error::input("dataset is empty"));
    }
    if cfg.solvers.is_empty() {
        return Err(Error::input("no solvers selected"));
    }
    cfg.solver.validate()?;
    cfg.timing.validate()?;

    let jobs: Vec<_> = dataset
        .entries
        .iter()
        .flat_map(|e| cfg.solvers.iter().map(move |&k| (e, k)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|(e, kind)| {
            bench_instance(&e.instance, e.known_optimum, *kind, &cfg.solver, cfg.timing, cfg.weights)
        })
        .collect::<Result<Vec<_>>>()?;
    let summaries = summarize(&records);
    Ok(BenchReport { records, summaries })
}

/// Per `(n, solver)` statistics; unsolved instances are left out of the TTS mean and std.
pub fn summarize(records: &[BenchRecord]) -> Vec<BenchSummary> {
    let mut groups: BTreeMap<(usize, SolverKind), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.n, r.solver)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((n, solver), rs)| {
            let finite: Vec<f64> = rs.iter().filter_map(|r| r.tts_us).collect();
            let (mean, std) = mean_std(&finite);
            let solved = rs.iter().filter(|r| r.successes > 0).count();
            BenchSummary {
                n,
                solver,
                instances: rs.len(),
                solved,
                success_rate: solved as f64 / rs.len() as f64,
                mean_theta: rs.iter().map(|r| r.theta).sum::<f64>() / rs.len() as f64,
                tts_mean_us: mean,
                tts_std_us: std,
            }
        })
        .collect()
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (Some(mean), None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some(var.sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub iterations: usize,
    pub attempts: usize,
    pub successes: usize,
    pub theta: f64,
    pub t_a_us: f64,
    pub r99: Option<f64>,
    pub tts_us: Option<f64>,
}

/// Success probability and TTS of one solver on one instance across iteration budgets.
///
/// Whether `θ` rises with the budget is reported, not enforced.
pub fn sweep(
    inst: &ProblemInstance,
    optimum: usize,
    kind: SolverKind,
    solver_cfg: &SolverConfig,
    budgets: &[usize],
    timing: TimingMode,
) -> Result<Vec<SweepRow>> {
    if budgets.len() < 2 {
        return Err(Error::input("a sweep needs at least two budgets"));
    }
    budgets
        .iter()
        .map(|&iterations| {
            let cfg = SolverConfig {
                iterations,
                ..*solver_cfg
            };
            let rec = bench_instance(inst, optimum, kind, &cfg, timing, None)?;
            Ok(SweepRow {
                iterations,
                attempts: rec.attempts,
                successes: rec.successes,
                theta: rec.theta,
                t_a_us: rec.t_a_us,
                r99: rec.r99,
                tts_us: rec.tts_us,
            })
        })
        .collect()
}

fn opt_cell(v: Option<f64>, missing: &str) -> String {
    v.map_or_else(|| missing.to_string(), |x| x.to_string())
}

pub const RECORD_COLUMNS: [&str; 12] = [
    "instance",
    "solver",
    "seed",
    "attempts",
    "successes",
    "theta",
    "t_a_us",
    "r99",
    "tts_us",
    "best_m",
    "feasible",
    "wall_total_s",
];

pub const SUMMARY_COLUMNS: [&str; 6] = [
    "n",
    "solver",
    "instances",
    "solved",
    "tts_mean_us",
    "tts_std_us",
];

pub const SWEEP_COLUMNS: [&str; 7] = [
    "iterations",
    "attempts",
    "successes",
    "theta",
    "t_a_us",
    "r99",
    "tts_us",
];

/// Results CSV; an unreachable `r99`/`tts_us` is written as `inf`.
pub fn write_records_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::input(format!("csv output: {e}"));
    w.write_record(RECORD_COLUMNS).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.solver.to_string(),
            r.seed.to_string(),
            r.attempts.to_string(),
            r.successes.to_string(),
            r.theta.to_string(),
            r.t_a_us.to_string(),
            opt_cell(r.r99, "inf"),
            opt_cell(r.tts_us, "inf"),
            r.best_m.map_or_else(String::new, |m| m.to_string()),
            r.feasible.to_string(),
            r.wall_total_s.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::input(format!("csv output: {e}")))
}

/// Summary CSV; statistics that do not exist (no solved instance, or fewer than two) are empty.
pub fn write_summary_csv<W: Write>(out: W, summaries: &[BenchSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::input(format!("csv output: {e}"));
    w.write_record(SUMMARY_COLUMNS).map_err(csv_err)?;
    for s in summaries {
        w.write_record([
            s.n.to_string(),
            s.solver.to_string(),
            s.instances.to_string(),
            s.solved.to_string(),
            opt_cell(s.tts_mean_us, ""),
            opt_cell(s.tts_std_us, ""),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::input(format!("csv output: {e}")))
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::input(format!("csv output: {e}"));
    w.write_record(SWEEP_COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.iterations.to_string(),
            r.attempts.to_string(),
            r.successes.to_string(),
            r.theta.to_string(),
            r.t_a_us.to_string(),
            opt_cell(r.r99, "inf"),
            opt_cell(r.tts_us, "inf"),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::input(format!("csv output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r99_edges() {
        assert!((r99(0.99).unwrap().unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(r99(1.0).unwrap(), Some(1.0));
        assert_eq!(r99(0.0).unwrap(), None);
        assert!(r99(-0.1).is_err());
        assert!(r99(1.5).is_err());
        assert!(r99(f64::NAN).is_err());
    }

    #[test]
    fn r99_real_valued() {
        let r = r99(0.277).unwrap().unwrap();
        assert!((r - 14.20).abs() < 0.05, "{r}");
    }

    #[test]
    fn tts_rejects_bad_time() {
        assert!(tts(0.0, 0.5).is_err());
        assert!(tts(-1.0, 0.5).is_err());
        assert_eq!(tts(20.0, 0.0).unwrap(), None);
        assert_eq!(tts(20.0, 1.0).unwrap(), Some(20.0));
    }

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[]), (None, None));
        assert_eq!(mean_std(&[3.0]), (Some(3.0), None));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, Some(2.5));
        assert!((s.unwrap() - 1.290_994_448_735_805_6).abs() < 1e-12);
    }

    fn record(n: usize, successes: usize, tts_us: Option<f64>) -> BenchRecord {
        BenchRecord {
            instance: format!("i{n}"),
            n,
            solver: SolverKind::SimulatedAnnealing,
            seed: 0,
            attempts: 10,
            successes,
            theta: successes as f64 / 10.0,
            theta_smoothed: 0.0,
            t_a_us: 1.0,
            r99: None,
            tts_us,
            best_m: None,
            feasible: false,
            wall_total_s: 0.0,
        }
    }

    #[test]
    fn summary_excludes_unsolved() {
        let recs = vec![
            record(3, 5, Some(10.0)),
            record(3, 0, None),
            record(3, 10, Some(20.0)),
        ];
        let s = summarize(&recs);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].instances, 3);
        assert_eq!(s[0].solved, 2);
        assert_eq!(s[0].unsolved(), 1);
        assert_eq!(s[0].tts_mean_us, Some(15.0));
        assert!((s[0].mean_theta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn csv_headers_fixed() {
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &[record(3, 0, None)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "instance,solver,seed,attempts,successes,theta,t_a_us,r99,tts_us,best_m,feasible,wall_total_s"
        );
        assert_eq!(lines.next().unwrap(), "i3,sa,0,10,0,0,1,inf,inf,,false,0");

        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &summarize(&[record(4, 1, Some(2.0))])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "n,solver,instances,solved,tts_mean_us,tts_std_us\n4,sa,1,1,2,\n");
    }

    #[test]
    fn timing_modes() {
        assert!(TimingMode::Fixed(0.0).validate().is_err());
        assert!(TimingMode::PerIteration(-1.0).validate().is_err());
        assert!(TimingMode::Measured.validate().is_ok());
    }
}
