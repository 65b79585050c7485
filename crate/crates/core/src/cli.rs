//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 I/O or parse error,
//! 4 infeasible or unreachable result, 5 internal invariant failure.
//! Failures print one JSON line on stderr. The effective configuration
//! goes to stderr as `# key = value` lines before any work starts, so stdout
//! carries only the command's output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bench::{
    run_benchmark, sweep, write_records_csv, write_summary_csv, write_sweep_csv, BenchConfig,
    TimingMode,
};
use crate::dataset::{generate_dataset, load_dataset, DatasetSpec};
use crate::encoder::{build_layout, build_qubo, decode_bits, export_qubo, PenaltyWeights};
use crate::error::Error;
use crate::problem::{validate_assignment, Assignment, FeasibilityReport, ProblemInstance};
use crate::solvers::{oracle_exact, SolverConfig, SolverKind};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "binpack-qubo", version, about = "Canister filling as QUBO: encode, solve, verify, benchmark")]
struct Cli {
    /// Worker threads for solver attempts and benchmark jobs.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the synthetic dataset (instance files plus manifest.csv).
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2023)]
        seed: u64,
        /// Keep only rows with at most this many elements.
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Export an instance's QUBO in the plain-text exchange format.
    Encode {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize an instance's QUBO with a heuristic solver and re-validate the result.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "sa")]
        solver: String,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum canister count with a witness packing.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an assignment against the capacity and minimum-fill constraints.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        /// Canister per element, comma separated, e.g. `0,0,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        assignment: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run solvers over a dataset and write results.csv and summary.csv.
    Bench {
        /// Dataset directory; without it the standard dataset is generated in memory.
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long, default_value_t = 2023)]
        dataset_seed: u64,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_delimiter = ',', default_value = "sa,simcim,sb")]
        solvers: Vec<String>,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[command(flatten)]
        timing: TimingArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Success probability and TTS of one solver across iteration budgets.
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        /// Known optimal canister count; computed by the oracle when omitted.
        #[arg(long)]
        optimum: Option<usize>,
        #[arg(long, default_value = "sa")]
        solver: String,
        #[arg(long, value_delimiter = ',', required = true)]
        budgets: Vec<usize>,
        #[command(flatten)]
        solver_args: SolverArgs,
        #[command(flatten)]
        timing: TimingArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print every solver default as a key = value config file.
    Describe {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Key = value solver config file, applied over the defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a single setting, e.g. `--set sb.dt=0.25`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    attempts: Option<usize>,
}

#[derive(Debug, Args)]
struct WeightArgs {
    /// Objective weight A.
    #[arg(long = "weight-a")]
    a: Option<f64>,
    /// Penalty weight B (default 2·A·m).
    #[arg(long = "weight-b")]
    b: Option<f64>,
}

#[derive(Debug, Args)]
struct TimingArgs {
    /// Use a fixed nominal per-attempt time (µs) instead of measured wall time.
    #[arg(long, conflicts_with = "ta_per_iteration")]
    fixed_ta: Option<f64>,
    /// Nominal µs per iteration, so t_a grows with the budget.
    #[arg(long)]
    ta_per_iteration: Option<f64>,
}

impl TimingArgs {
    fn mode(&self) -> TimingMode {
        match (self.fixed_ta, self.ta_per_iteration) {
            (Some(us), _) => TimingMode::Fixed(us),
            (None, Some(us)) => TimingMode::PerIteration(us),
            (None, None) => TimingMode::Measured,
        }
    }
}

impl SolverArgs {
    fn resolve(&self) -> Result<SolverConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => SolverConfig::load(path)?,
            None => SolverConfig::default(),
        };
        for kv in &self.overrides {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::input(format!("--set expects KEY=VALUE, got {kv:?}")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(it) = self.iterations {
            cfg.iterations = it;
        }
        if let Some(at) = self.attempts {
            cfg.attempts = at;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl WeightArgs {
    fn resolve(&self, inst: &ProblemInstance) -> Result<PenaltyWeights, Error> {
        let a = self.a.unwrap_or(1.0);
        let b = self.b.unwrap_or(2.0 * a * inst.m() as f64);
        PenaltyWeights::new(a, b)
    }
}

/// A command failure with its exit status.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Input(_) | Error::TooLarge { .. } => (EXIT_USAGE, "input"),
            Error::Io { .. } => (EXIT_IO, "io"),
            Error::Parse { .. } => (EXIT_IO, "parse"),
            Error::Infeasible => (EXIT_INFEASIBLE, "infeasible"),
            Error::RejectionBudget { .. } => (EXIT_INFEASIBLE, "rejection_budget"),
            Error::Invariant(_) => (EXIT_INTERNAL, "invariant"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Error::io(path, e).into()
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    code: i32,
    message: &'a str,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            // clap's message up to its usage block, folded onto one line
            let detail = e.to_string();
            let message = detail
                .lines()
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            report(err, &Failure {
                code: EXIT_USAGE,
                kind: "usage",
                message: message.trim_start_matches("error: ").to_string(),
            });
            return EXIT_USAGE;
        }
    };

    if let Some(jobs) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }

    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}

fn report(err: &mut dyn Write, f: &Failure) {
    let line = serde_json::to_string(&ErrorLine {
        error: f.kind,
        code: f.code,
        message: &f.message,
    })
    .expect("error line serializes");
    let _ = writeln!(err, "{line}");
}

fn print_config(err: &mut dyn Write, entries: &[(&str, String)]) {
    for (k, v) in entries {
        let _ = writeln!(err, "# {k} = {v}");
    }
}

/// Writes to `path`, or to stdout when no path is given.
fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn bits_string(z: &[u8]) -> String {
    z.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

#[derive(Serialize)]
struct SolveReport {
    instance: String,
    solver: SolverKind,
    seed: u64,
    attempts: usize,
    iterations: usize,
    dim: usize,
    weights: PenaltyWeights,
    bits: String,
    energy: f64,
    penalty: f64,
    assignment: Option<Assignment>,
    decode_error: Option<String>,
    feasibility: Option<FeasibilityReport>,
}

impl SolveReport {
    fn text(&self) -> String {
        let mut s = format!(
            "instance {}  solver {}  seed {}  D = {}\nbits    {}\nenergy  {}  (penalty {})\n",
            self.instance, self.solver, self.seed, self.dim, self.bits, self.energy, self.penalty
        );
        match (&self.assignment, &self.feasibility, &self.decode_error) {
            (Some(a), Some(f), _) => {
                s.push_str(&format!("assignment {a}\n{f}"));
            }
            (_, _, Some(e)) => s.push_str(&format!("no assignment: {e}\nfeasible: no\n")),
            _ => {}
        }
        s
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Generate { out: dir, seed, max_n } => {
            let mut spec = DatasetSpec::standard(seed);
            if let Some(max) = max_n {
                spec = spec.filtered(|n| n <= max);
            }
            print_config(
                err,
                &[
                    ("command", "generate".into()),
                    ("seed", seed.to_string()),
                    ("rows", spec.rows.len().to_string()),
                    ("max_draws", spec.max_draws.to_string()),
                    ("out", dir.display().to_string()),
                ],
            );
            let ds = generate_dataset(&spec)?;
            ds.write(&dir)?;
            let _ = writeln!(out, "wrote {} instances to {}", ds.len(), dir.display());
            Ok(0)
        }

        Command::Encode {
            instance,
            weights,
            out: path,
        } => {
            let inst = ProblemInstance::load(&instance)?;
            let w = weights.resolve(&inst)?;
            let layout = build_layout(&inst);
            print_config(
                err,
                &[
                    ("command", "encode".into()),
                    ("instance", instance.display().to_string()),
                    ("weight_a", w.a_weight.to_string()),
                    ("weight_b", w.b_weight.to_string()),
                    ("s", layout.s.to_string()),
                    ("k", layout.k.to_string()),
                    ("dim", layout.dim.to_string()),
                ],
            );
            let model = build_qubo(&inst, w);
            emit(out, path.as_deref(), &export_qubo(&model))?;
            Ok(0)
        }

        Command::Solve {
            instance,
            solver,
            solver_args,
            weights,
            format,
            out: path,
        } => {
            let inst = ProblemInstance::load(&instance)?;
            let kind: SolverKind = solver.parse()?;
            let cfg = solver_args.resolve()?;
            let w = weights.resolve(&inst)?;
            let mut entries = vec![
                ("command", "solve".to_string()),
                ("instance", instance.display().to_string()),
                ("solver", kind.to_string()),
                ("weight_a", w.a_weight.to_string()),
                ("weight_b", w.b_weight.to_string()),
            ];
            entries.extend(cfg.entries());
            print_config(err, &entries);

            let model = build_qubo(&inst, w);
            let result = kind.solve(&model, &cfg)?;
            let layout = build_layout(&inst);
            let (assignment, decode_error, feasibility) = match decode_bits(&layout, &result.best_bits) {
                Ok(asg) => {
                    let rep = validate_assignment(&inst, &asg)?;
                    (Some(asg), None, Some(rep))
                }
                Err(e) => (None, Some(e.to_string()), None),
            };
            let feasible = feasibility.as_ref().is_some_and(|f| f.feasible);
            let rep = SolveReport {
                instance: inst.name().to_string(),
                solver: kind,
                seed: cfg.seed,
                attempts: cfg.attempts,
                iterations: cfg.iterations,
                dim: model.dim(),
                weights: w,
                bits: bits_string(&result.best_bits),
                energy: result.best_energy,
                penalty: model.penalty(&result.best_bits)?,
                assignment,
                decode_error,
                feasibility,
            };
            let _ = writeln!(err, "# wall_time_s = {}", result.wall_time_total);
            let text = match format {
                Format::Json => to_json(&rep),
                Format::Text => rep.text(),
                Format::Csv => {
                    let mut s = String::from("instance,solver,seed,energy,penalty,bits,assignment,feasible,objective_m\n");
                    s.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{}\n",
                        rep.instance,
                        rep.solver,
                        rep.seed,
                        rep.energy,
                        rep.penalty,
                        rep.bits,
                        rep.assignment.as_ref().map_or_else(String::new, |a| {
                            a.canister_of().iter().map(|j| j.to_string()).collect::<Vec<_>>().join(" ")
                        }),
                        feasible,
                        rep.feasibility.as_ref().map_or_else(String::new, |f| f.objective_m.to_string()),
                    ));
                    s
                }
            };
            emit(out, path.as_deref(), &text)?;
            Ok(if feasible { 0 } else { EXIT_INFEASIBLE })
        }

        Command::Oracle {
            instance,
            format,
            out: path,
        } => {
            let inst = ProblemInstance::load(&instance)?;
            print_config(
                err,
                &[
                    ("command", "oracle".into()),
                    ("instance", instance.display().to_string()),
                ],
            );
            let sol = oracle_exact(&inst)?;
            let report = validate_assignment(&inst, &sol.witness)?;
            let text = match format {
                Format::Json => to_json(&serde_json::json!({
                    "instance": inst.name(),
                    "optimal_m": sol.optimal_m,
                    "witness": sol.witness,
                    "feasibility": report,
                })),
                Format::Csv => format!(
                    "instance,optimal_m,witness\n{},{},{}\n",
                    inst.name(),
                    sol.optimal_m,
                    sol.witness
                        .canister_of()
                        .iter()
                        .map(|j| j.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                ),
                Format::Text => format!("M={}\nwitness {}\n{}", sol.optimal_m, sol.witness, report),
            };
            emit(out, path.as_deref(), &text)?;
            Ok(0)
        }

        Command::Validate {
            instance,
            assignment,
            format,
            out: path,
        } => {
            let inst = ProblemInstance::load(&instance)?;
            print_config(
                err,
                &[
                    ("command", "validate".into()),
                    ("instance", instance.display().to_string()),
                ],
            );
            let asg = Assignment::for_instance(&inst, assignment)?;
            let report = validate_assignment(&inst, &asg)?;
            let text = match format {
                Format::Json => to_json(&report),
                Format::Csv => format!(
                    "feasible,objective_m,capacity_violations,underfill_violations\n{},{},{},{}\n",
                    report.feasible,
                    report.objective_m,
                    report.capacity_violations.len(),
                    report.underfill_violations.len()
                ),
                Format::Text => report.to_string(),
            };
            emit(out, path.as_deref(), &text)?;
            Ok(if report.feasible { 0 } else { EXIT_INFEASIBLE })
        }

        Command::Bench {
            dataset,
            dataset_seed,
            max_n,
            solvers,
            solver_args,
            timing,
            out: dir,
        } => {
            let cfg = solver_args.resolve()?;
            let kinds = solvers
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<SolverKind>, _>>()?;
            let mut ds = match &dataset {
                Some(path) => load_dataset(path)?,
                None => generate_dataset(&DatasetSpec::standard(dataset_seed))?,
            };
            if let Some(max) = max_n {
                ds.entries.retain(|e| e.instance.n() <= max);
            }
            let bench = BenchConfig {
                solvers: kinds,
                solver: cfg,
                timing: timing.mode(),
                weights: None,
            };
            let mut entries = vec![
                ("command", "bench".to_string()),
                (
                    "dataset",
                    dataset.as_ref().map_or_else(
                        || format!("generated(seed={dataset_seed})"),
                        |p| p.display().to_string(),
                    ),
                ),
                ("instances", ds.len().to_string()),
                ("solvers", solvers.join(",")),
                ("timing", format!("{:?}", bench.timing)),
                ("weights", "A=1, B=2·A·m".to_string()),
                ("tts_statistics", "unsolved instances excluded from mean/std".to_string()),
            ];
            entries.extend(cfg.entries());
            print_config(err, &entries);

            let report = run_benchmark(&ds, &bench)?;
            fs::create_dir_all(&dir).map_err(|e| io_failure(&dir, e))?;
            let results = dir.join("results.csv");
            let file = fs::File::create(&results).map_err(|e| io_failure(&results, e))?;
            write_records_csv(file, &report.records)?;
            let summary = dir.join("summary.csv");
            let file = fs::File::create(&summary).map_err(|e| io_failure(&summary, e))?;
            write_summary_csv(file, &report.summaries)?;
            let unsolved: usize = report.summaries.iter().map(|s| s.unsolved()).sum();
            let _ = writeln!(
                out,
                "wrote {} and {} ({} records, {} unsolved instance/solver pairs excluded from TTS statistics)",
                results.display(),
                summary.display(),
                report.records.len(),
                unsolved
            );
            Ok(0)
        }

        Command::Sweep {
            instance,
            optimum,
            solver,
            budgets,
            solver_args,
            timing,
            out: path,
        } => {
            let inst = ProblemInstance::load(&instance)?;
            let kind: SolverKind = solver.parse()?;
            let cfg = solver_args.resolve()?;
            let optimum = match optimum {
                Some(m) => m,
                None => oracle_exact(&inst)?.optimal_m,
            };
            let mut entries = vec![
                ("command", "sweep".to_string()),
                ("instance", instance.display().to_string()),
                ("solver", kind.to_string()),
                ("optimum", optimum.to_string()),
                (
                    "budgets",
                    budgets.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
                ),
                ("timing", format!("{:?}", timing.mode())),
            ];
            entries.extend(cfg.entries());
            print_config(err, &entries);

            let rows = sweep(&inst, optimum, kind, &cfg, &budgets, timing.mode())?;
            let mut buf = Vec::new();
            write_sweep_csv(&mut buf, &rows)?;
            emit(out, path.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))?;
            Ok(0)
        }

        Command::Describe { format } => {
            let cfg = SolverConfig::default();
            print_config(err, &[("command", "describe".into())]);
            let text = match format {
                Format::Text => {
                    let mut s = String::from("# solver defaults (key = value); `auto` derives the value from the model\n");
                    s.push_str(&cfg.to_kv());
                    s.push_str("# penalty weights: A = 1, B = 2·A·m\n");
                    s
                }
                Format::Json => to_json(&cfg),
                Format::Csv => {
                    let mut s = String::from("key,value\n");
                    for (k, v) in cfg.entries() {
                        s.push_str(&format!("{k},{v}\n"));
                    }
                    s
                }
            };
            emit(out, None, &text)?;
            Ok(0)
        }
    }
}
