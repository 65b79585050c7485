use std::fs;

use binpack_qubo::dataset::{generate_dataset, load_dataset, DatasetSpec, MANIFEST_FILE};
use binpack_qubo::encoder::build_layout;
use binpack_qubo::problem::ProblemInstance;
use binpack_qubo::solvers::oracle_exact;
use binpack_qubo::Error;

fn small(seed: u64) -> DatasetSpec {
    DatasetSpec::standard(seed).filtered(|n| n <= 5)
}

#[test]
fn standard_family_shape() {
    let ds = generate_dataset(&DatasetSpec::standard(2023)).unwrap();
    assert_eq!(ds.len(), 81);
    for n in 3..=10 {
        let rows: Vec<_> = ds.entries.iter().filter(|e| e.instance.n() == n).collect();
        assert_eq!(rows.len(), 10, "n = {n}");
        for e in rows {
            assert_eq!(e.instance.m(), 3);
            assert_eq!(e.known_optimum, 2);
            assert_eq!(e.instance.p_max(), if n <= 5 { 7 } else { 15 });
            assert!(e.instance.p().iter().all(|&p| (1..=e.instance.p_max()).contains(&p)));
        }
    }
    let names: std::collections::BTreeSet<_> = ds.entries.iter().map(|e| e.file.as_str()).collect();
    assert_eq!(names.len(), 81);
}

#[test]
fn optima_are_oracle_certified() {
    let ds = generate_dataset(&small(5)).unwrap();
    for e in &ds.entries {
        assert_eq!(oracle_exact(&e.instance).unwrap().optimal_m, e.known_optimum);
        assert_eq!(build_layout(&e.instance).s, e.s);
    }
}

#[test]
fn same_seed_same_dataset_other_seed_differs() {
    let a = generate_dataset(&small(9)).unwrap();
    assert_eq!(a, generate_dataset(&small(9)).unwrap());
    assert_ne!(a, generate_dataset(&small(10)).unwrap());
}

#[test]
fn files_round_trip_byte_for_byte() {
    let ds = generate_dataset(&small(1)).unwrap();
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ds.write(d1.path()).unwrap();
    let back = load_dataset(d1.path()).unwrap();
    assert_eq!(back, ds);
    back.write(d2.path()).unwrap();
    for e in &ds.entries {
        assert_eq!(fs::read(d1.path().join(&e.file)).unwrap(), fs::read(d2.path().join(&e.file)).unwrap());
    }
    assert_eq!(
        fs::read(d1.path().join(MANIFEST_FILE)).unwrap(),
        fs::read(d2.path().join(MANIFEST_FILE)).unwrap()
    );
}

#[test]
fn missing_instance_file_is_an_io_error() {
    let ds = generate_dataset(&small(1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    ds.write(dir.path()).unwrap();
    fs::remove_file(dir.path().join(&ds.entries[3].file)).unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(Error::Io { .. })));
}

#[test]
fn missing_manifest_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(Error::Io { .. })));
}

#[test]
fn tampered_instance_is_detected() {
    let ds = generate_dataset(&small(1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    ds.write(dir.path()).unwrap();
    let e = &ds.entries[5];
    // every element at full capacity: the stored two-canister witness overflows
    let inst = &e.instance;
    let tampered =
        ProblemInstance::new(inst.name(), inst.m(), vec![inst.p_max(); inst.n()], inst.p_max(), inst.n_min()).unwrap();
    tampered.save(dir.path().join(&e.file)).unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(Error::Parse { .. })));
}

#[test]
fn tampered_manifest_optimum_is_detected() {
    let ds = generate_dataset(&small(1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    ds.write(dir.path()).unwrap();
    let path = dir.path().join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    // known_optimum is the eighth column
    let mut cells: Vec<String> = lines[3].split(',').map(String::from).collect();
    cells[7] = "1".into();
    lines[3] = cells.join(",");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(Error::Parse { .. })));
}

#[test]
fn malformed_instance_json_is_a_parse_error() {
    let ds = generate_dataset(&small(1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    ds.write(dir.path()).unwrap();
    fs::write(dir.path().join(&ds.entries[0].file), "{\"name\": 3").unwrap();
    assert!(matches!(load_dataset(dir.path()), Err(Error::Parse { .. })));
}
