use binpack_qubo::bench::{
    bench_instance, is_success, r99, run_benchmark, summarize, sweep, tts, write_records_csv,
    write_summary_csv, write_sweep_csv, BenchConfig, TimingMode, RECORD_COLUMNS, SUMMARY_COLUMNS,
};
use binpack_qubo::dataset::{generate_dataset, Dataset, DatasetSpec};
use binpack_qubo::encoder::{build_layout, build_qubo, decode_bits, PenaltyWeights};
use binpack_qubo::problem::{validate_assignment, ProblemInstance};
use binpack_qubo::solvers::{SolverConfig, SolverKind};
use binpack_qubo::Error;
use proptest::prelude::*;

fn trivial() -> ProblemInstance {
    ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1).unwrap()
}

fn small_dataset() -> Dataset {
    generate_dataset(&DatasetSpec::standard(2023).filtered(|n| n <= 4)).unwrap()
}

fn quick() -> SolverConfig {
    SolverConfig { attempts: 20, iterations: 200, ..SolverConfig::default() }
}

proptest! {
    #[test]
    fn tts_monotone_in_theta_and_time(t in 0.1f64..1e4, a in 0.001f64..0.998, gap in 0.001f64..0.5) {
        let b = (a + gap).min(0.999);
        prop_assume!(b > a);
        prop_assert!(tts(t, b).unwrap().unwrap() < tts(t, a).unwrap().unwrap());
        prop_assert!(tts(t * 1.5, a).unwrap().unwrap() > tts(t, a).unwrap().unwrap());
    }
}

#[test]
fn r99_reference_values() {
    assert!((r99(0.99).unwrap().unwrap() - 1.0).abs() < 1e-12);
    assert!((r99(0.277).unwrap().unwrap() - 14.20).abs() < 0.05);
    assert_eq!(r99(0.0).unwrap(), None);
    assert_eq!(r99(1.0).unwrap(), Some(1.0));
    assert!(matches!(r99(1.5), Err(Error::Input(_))));
    assert!(matches!(tts(0.0, 0.5), Err(Error::Input(_))));
    assert_eq!(tts(5.0, 0.0).unwrap(), None);
}

#[test]
fn always_solved_instance_has_tts_equal_to_ta() {
    let rec = bench_instance(
        &trivial(),
        1,
        SolverKind::SimulatedAnnealing,
        &quick(),
        TimingMode::Fixed(20.0),
        None,
    )
    .unwrap();
    assert_eq!(rec.successes, rec.attempts);
    assert_eq!(rec.theta, 1.0);
    assert_eq!(rec.tts_us, Some(20.0));
    assert_eq!(rec.best_m, Some(1));
    assert!(rec.feasible);
}

#[test]
fn never_solved_instance_still_emits_a_record() {
    // no packing of two elements uses zero canisters
    let rec = bench_instance(
        &trivial(),
        0,
        SolverKind::SimulatedAnnealing,
        &quick(),
        TimingMode::Fixed(20.0),
        None,
    )
    .unwrap();
    assert_eq!(rec.successes, 0);
    assert_eq!(rec.theta, 0.0);
    assert_eq!(rec.r99, None);
    assert_eq!(rec.tts_us, None);
    assert_eq!(rec.best_m, Some(1));
    assert!(rec.feasible);
    assert!(rec.theta_smoothed > 0.0 && rec.theta_smoothed < 1.0);
}

#[test]
fn successes_are_feasible_optimal_decodes() {
    let ds = small_dataset();
    for e in ds.entries.iter().take(8) {
        let model = build_qubo(&e.instance, PenaltyWeights::default_for(&e.instance));
        let res = SolverKind::SimCim.solve(&model, &quick()).unwrap();
        for a in &res.per_attempt {
            if is_success(&e.instance, &a.bits, e.known_optimum) {
                let asg = decode_bits(&build_layout(&e.instance), &a.bits).unwrap();
                let rep = validate_assignment(&e.instance, &asg).unwrap();
                assert!(rep.feasible);
                assert_eq!(rep.objective_m, e.known_optimum);
            }
        }
    }
}

#[test]
fn records_follow_dataset_and_solver_order() {
    let ds = small_dataset();
    let cfg = BenchConfig { solver: quick(), timing: TimingMode::Fixed(1.0), ..BenchConfig::default() };
    let report = run_benchmark(&ds, &cfg).unwrap();
    assert_eq!(report.records.len(), ds.len() * 3);
    for (chunk, e) in report.records.chunks(3).zip(&ds.entries) {
        assert!(chunk.iter().all(|r| r.instance == e.instance.name()));
        assert_eq!(chunk.iter().map(|r| r.solver).collect::<Vec<_>>(), SolverKind::ALL.to_vec());
    }
    for r in &report.records {
        assert!(r.successes <= r.attempts);
        assert!((0.0..=1.0).contains(&r.theta));
    }
    assert_eq!(report.summaries, summarize(&report.records));
    let groups: Vec<_> = report.summaries.iter().map(|s| (s.n, s.solver)).collect();
    assert_eq!(groups.len(), 3 * 3);
    assert!(report.summaries.iter().all(|s| s.solved <= s.instances));
}

#[test]
fn fixed_timing_benchmark_is_reproducible() {
    let ds = small_dataset();
    let cfg = BenchConfig { solver: quick(), timing: TimingMode::Fixed(3.0), ..BenchConfig::default() };
    let strip = |mut r: binpack_qubo::bench::BenchReport| {
        r.records.iter_mut().for_each(|x| x.wall_total_s = 0.0);
        r
    };
    let a = strip(run_benchmark(&ds, &cfg).unwrap());
    let b = strip(run_benchmark(&ds, &cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn empty_inputs_are_rejected() {
    let empty = Dataset { seed: 0, entries: vec![] };
    assert!(matches!(run_benchmark(&empty, &BenchConfig::default()), Err(Error::Input(_))));
    let mut cfg = BenchConfig::default();
    cfg.solver.attempts = 0;
    assert!(matches!(run_benchmark(&small_dataset(), &cfg), Err(Error::Input(_))));
    cfg = BenchConfig { solvers: vec![], ..BenchConfig::default() };
    assert!(matches!(run_benchmark(&small_dataset(), &cfg), Err(Error::Input(_))));
}

#[test]
fn sweep_rows_follow_budgets() {
    let rows = sweep(
        &trivial(),
        1,
        SolverKind::SimulatedAnnealing,
        &quick(),
        &[5, 10, 20],
        TimingMode::PerIteration(2.0),
    )
    .unwrap();
    assert_eq!(rows.iter().map(|r| r.iterations).collect::<Vec<_>>(), vec![5, 10, 20]);
    assert_eq!(rows.iter().map(|r| r.t_a_us).collect::<Vec<_>>(), vec![10.0, 20.0, 40.0]);
    assert!(matches!(
        sweep(&trivial(), 1, SolverKind::SimulatedAnnealing, &quick(), &[5], TimingMode::Measured),
        Err(Error::Input(_))
    ));
}

#[test]
fn csv_layouts() {
    let ds = small_dataset();
    let cfg = BenchConfig {
        solvers: vec![SolverKind::SimulatedAnnealing],
        solver: quick(),
        timing: TimingMode::Fixed(1.0),
        weights: None,
    };
    let report = run_benchmark(&ds, &cfg).unwrap();

    let mut buf = Vec::new();
    write_records_csv(&mut buf, &report.records).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), RECORD_COLUMNS.join(","));
    assert_eq!(lines.count(), report.records.len());

    let mut buf = Vec::new();
    write_summary_csv(&mut buf, &report.summaries).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), SUMMARY_COLUMNS.join(","));

    let rows = sweep(&trivial(), 0, SolverKind::SimulatedAnnealing, &quick(), &[1, 2], TimingMode::Fixed(1.0)).unwrap();
    let mut buf = Vec::new();
    write_sweep_csv(&mut buf, &rows).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",inf,inf")), "{text}");
}
