//! Synthetic benchmark family with oracle-certified optima.
//!
//! Each row draws heat outputs uniformly from `1..=p_max` (with
//! `p_max = 2^s − 1`) and keeps a draw only if the exact oracle confirms
//! the row's target optimum. The default family has one trivial two-element
//! instance on two canisters (optimum 1) and ten instances for every
//! `n = 3..=10` on three canisters (optimum 2).
//!
//! On disk a dataset is a directory of instance JSON files plus
//! `manifest.csv`.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoder::{bit_width, build_layout};
use crate::error::{Error, Result};
use crate::problem::{validate_assignment, Assignment, ProblemInstance};
use crate::solvers::oracle_exact;

pub const MANIFEST_FILE: &str = "manifest.csv";
pub const DISTRIBUTION: &str = "uniform[1,p_max] | oracle optimum == target";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub n: usize,
    pub count: usize,
    /// Capacity slack width; the row's capacity is `2^s − 1`.
    pub s: usize,
    pub m: usize,
    /// Required optimal number of canisters.
    pub target: usize,
}

impl DatasetRow {
    pub fn p_max(&self) -> u64 {
        (1u64 << self.s) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub rows: Vec<DatasetRow>,
    pub n_min: usize,
    pub seed: u64,
    /// Rejection draws allowed per instance.
    pub max_draws: u64,
}

impl DatasetSpec {
    /// The 1 + 80 instance family.
    ///
    /// Slack widths are 2 for the trivial case, 3 for `n = 3..=5` and 4 for
    /// `n = 6..=10`, which makes `D = m(1 + n + s)` equal 10, 21, 24, 27, 33,
    /// 36, 39, 42, 45.
    pub fn standard(seed: u64) -> Self {
        let mut rows = vec![DatasetRow {
            n: 2,
            count: 1,
            s: 2,
            m: 2,
            target: 1,
        }];
        rows.extend((3..=10).map(|n| DatasetRow {
            n,
            count: 10,
            s: if n <= 5 { 3 } else { 4 },
            m: 3,
            target: 2,
        }));
        DatasetSpec {
            rows,
            n_min: 1,
            seed,
            max_draws: 10_000_000,
        }
    }

    /// Keeps only rows whose element count satisfies `keep`.
    pub fn filtered(mut self, keep: impl Fn(usize) -> bool) -> Self {
        self.rows.retain(|r| keep(r.n));
        self
    }

    fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(Error::input("dataset spec has no rows"));
        }
        for r in &self.rows {
            if r.n == 0 || r.m == 0 || r.count == 0 || r.s == 0 || r.s > 32 {
                return Err(Error::input(format!("invalid dataset row {r:?}")));
            }
            if r.target == 0 || r.target > r.m.min(r.n) {
                return Err(Error::input(format!("row n={}: target {} out of range", r.n, r.target)));
            }
            if self.n_min == 0 || self.n_min > r.n {
                return Err(Error::input(format!("row n={}: n_min {} out of range", r.n, self.n_min)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub file: String,
    pub instance: ProblemInstance,
    pub s: usize,
    pub known_optimum: usize,
    pub witness: Assignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub seed: u64,
    pub entries: Vec<DatasetEntry>,
}

/// Draws every row from one seeded stream, in row order.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut entries = Vec::new();
    for row in &spec.rows {
        let p_max = row.p_max();
        for idx in 0..row.count {
            let (p, witness) = draw_instance(&mut rng, row, spec, p_max).ok_or(Error::RejectionBudget {
                n: row.n,
                target: row.target,
                budget: spec.max_draws,
            })?;
            let name = if row.count == 1 {
                format!("n{:02}", row.n)
            } else {
                format!("n{:02}_{idx:02}", row.n)
            };
            let instance = ProblemInstance::new(name.clone(), row.m, p, p_max, spec.n_min)?;
            entries.push(DatasetEntry {
                file: format!("{name}.json"),
                s: build_layout(&instance).s,
                instance,
                known_optimum: row.target,
                witness,
            });
        }
    }
    Ok(Dataset {
        seed: spec.seed,
        entries,
    })
}

fn draw_instance(
    rng: &mut ChaCha8Rng,
    row: &DatasetRow,
    spec: &DatasetSpec,
    p_max: u64,
) -> Option<(Vec<u64>, Assignment)> {
    for _ in 0..spec.max_draws {
        let p: Vec<u64> = (0..row.n).map(|_| rng.gen_range(1..=p_max)).collect();
        let total: u64 = p.iter().sum();
        // necessary for the target: fits in `target` canisters, not in fewer
        if total > row.target as u64 * p_max || total <= (row.target as u64 - 1) * p_max {
            continue;
        }
        let inst = ProblemInstance::new("draw", row.m, p.clone(), p_max, spec.n_min).ok()?;
        if let Ok(sol) = oracle_exact(&inst) {
            if sol.optimal_m == row.target {
                return Some((p, sol.witness));
            }
        }
    }
    None
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestRecord {
    file: String,
    name: String,
    n: usize,
    m: usize,
    s: usize,
    p_max: u64,
    n_min: usize,
    known_optimum: usize,
    witness: String,
    seed: u64,
    distribution: String,
}

fn witness_to_string(w: &Assignment) -> String {
    w.canister_of()
        .iter()
        .map(|j| j.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn witness_from_str(s: &str) -> Option<Assignment> {
    let v: Option<Vec<usize>> = s.split_whitespace().map(|t| t.parse().ok()).collect();
    Assignment::new(v?).ok()
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes instance files and the manifest into `dir`, creating it if needed.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for e in &self.entries {
            e.instance.save(dir.join(&e.file))?;
        }
        let path = dir.join(MANIFEST_FILE);
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::parse(&path, e))?;
        for e in &self.entries {
            let inst = &e.instance;
            w.serialize(ManifestRecord {
                file: e.file.clone(),
                name: inst.name().to_string(),
                n: inst.n(),
                m: inst.m(),
                s: e.s,
                p_max: inst.p_max(),
                n_min: inst.n_min(),
                known_optimum: e.known_optimum,
                witness: witness_to_string(&e.witness),
                seed: self.seed,
                distribution: DISTRIBUTION.to_string(),
            })
            .map_err(|err| Error::parse(&path, err))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))
    }
}

/// Loads a dataset directory and cross-checks every file against its manifest record.
pub fn load_dataset(dir: impl AsRef<Path>) -> Result<Dataset> {
    let dir = dir.as_ref();
    let path = dir.join(MANIFEST_FILE);
    let mut reader = csv::Reader::from_path(&path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(&path, io),
        other => Error::parse(&path, format!("{other:?}")),
    })?;

    let mut entries = Vec::new();
    let mut seed = None;
    for rec in reader.deserialize::<ManifestRecord>() {
        let rec = rec.map_err(|e| Error::parse(&path, e))?;
        let file_path = dir.join(&rec.file);
        let instance = ProblemInstance::load(&file_path)?;
        let mismatch = |what: &str| {
            Error::parse(&file_path, format!("{what} disagrees with the manifest"))
        };
        if instance.n() != rec.n {
            return Err(mismatch("n"));
        }
        if instance.m() != rec.m {
            return Err(mismatch("m"));
        }
        if instance.p_max() != rec.p_max {
            return Err(mismatch("p_max"));
        }
        if instance.n_min() != rec.n_min {
            return Err(mismatch("n_min"));
        }
        if bit_width(instance.p_max()) != rec.s {
            return Err(mismatch("s"));
        }
        let witness = witness_from_str(&rec.witness)
            .ok_or_else(|| Error::parse(&path, format!("bad witness for {}", rec.file)))?;
        let report = validate_assignment(&instance, &witness)
            .map_err(|e| Error::parse(&file_path, e))?;
        if !report.feasible || report.objective_m != rec.known_optimum {
            return Err(Error::parse(
                &file_path,
                "stored witness is not a feasible packing at the known optimum",
            ));
        }
        seed.get_or_insert(rec.seed);
        entries.push(DatasetEntry {
            file: rec.file,
            instance,
            s: rec.s,
            known_optimum: rec.known_optimum,
            witness,
        });
    }
    if entries.is_empty() {
        return Err(Error::parse(&path, "manifest lists no instances"));
    }
    Ok(Dataset {
        seed: seed.unwrap_or(0),
        entries,
    })
}
