//! Exact oracles and heuristic QUBO minimizers.
//!
//! Every heuristic follows one contract: `attempts` independent runs, each
//! seeded from `(seed, attempt index)` so any attempt can be replayed on its
//! own, fanned out over the current rayon pool and collected in attempt
//! order. Results therefore do not depend on the number of worker threads.

mod config;
mod oracle;
mod sa;
mod sb;
mod simcim;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::QuboModel;
use crate::error::{Error, Result};

pub use config::{SaParams, SbParams, SimCimParams, SolverConfig};
pub use oracle::{brute_force_bits, oracle_exact, OracleSolution, BRUTE_FORCE_MAX_DIM, ORACLE_MAX_ELEMENTS};
pub use sa::solve_sa;
pub use sb::solve_sb;
pub use simcim::solve_simcim;

/// Outcome of one independent run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptResult {
    pub bits: Vec<u8>,
    pub energy: f64,
    /// Seconds.
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best_bits: Vec<u8>,
    pub best_energy: f64,
    pub per_attempt: Vec<AttemptResult>,
    /// Seconds.
    pub wall_time_total: f64,
}

impl SolveResult {
    /// Everything except the wall-clock fields, for reproducibility checks.
    pub fn same_outcome(&self, other: &SolveResult) -> bool {
        self.best_bits == other.best_bits
            && self.best_energy.to_bits() == other.best_energy.to_bits()
            && self.per_attempt.len() == other.per_attempt.len()
            && self
                .per_attempt
                .iter()
                .zip(&other.per_attempt)
                .all(|(a, b)| a.bits == b.bits && a.energy.to_bits() == b.energy.to_bits())
    }
}

/// Heuristic solver selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverKind {
    #[serde(rename = "sa")]
    SimulatedAnnealing,
    #[serde(rename = "simcim")]
    SimCim,
    #[serde(rename = "sb")]
    SimulatedBifurcation,
}

impl SolverKind {
    pub const ALL: [SolverKind; 3] = [
        SolverKind::SimulatedAnnealing,
        SolverKind::SimCim,
        SolverKind::SimulatedBifurcation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::SimulatedAnnealing => "sa",
            SolverKind::SimCim => "simcim",
            SolverKind::SimulatedBifurcation => "sb",
        }
    }

    pub fn solve(self, model: &QuboModel, cfg: &SolverConfig) -> Result<SolveResult> {
        match self {
            SolverKind::SimulatedAnnealing => solve_sa(model, cfg),
            SolverKind::SimCim => solve_simcim(model, cfg),
            SolverKind::SimulatedBifurcation => solve_sb(model, cfg),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sa" => Ok(SolverKind::SimulatedAnnealing),
            "simcim" => Ok(SolverKind::SimCim),
            "sb" | "sbm" => Ok(SolverKind::SimulatedBifurcation),
            _ => Err(Error::input(format!(
                "unknown solver {s:?} (expected sa, simcim or sb)"
            ))),
        }
    }
}

/// Generator for one attempt: the seed picks the key, the attempt index the stream.
pub(crate) fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// Runs `attempt` for every index and keeps the lowest energy, first attempt on ties.
pub(crate) fn run_attempts<F>(model: &QuboModel, cfg: &SolverConfig, attempt: F) -> Result<SolveResult>
where
    F: Fn(&mut ChaCha8Rng) -> Vec<u8> + Sync,
{
    cfg.validate()?;
    let start = Instant::now();
    let per_attempt: Vec<AttemptResult> = (0..cfg.attempts)
        .into_par_iter()
        .map(|idx| {
            let t0 = Instant::now();
            let mut rng = attempt_rng(cfg.seed, idx);
            let bits = attempt(&mut rng);
            let wall_time = t0.elapsed().as_secs_f64();
            let energy = model.energy_unchecked(&bits);
            AttemptResult {
                bits,
                energy,
                wall_time,
            }
        })
        .collect();
    let wall_time_total = start.elapsed().as_secs_f64();

    let best = per_attempt
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.energy.total_cmp(&b.energy).then(ia.cmp(ib)))
        .map(|(_, a)| a)
        .expect("attempts >= 1");
    Ok(SolveResult {
        best_bits: best.bits.clone(),
        best_energy: best.energy,
        per_attempt: per_attempt.clone(),
        wall_time_total,
    })
}

/// Greedy descent: sweeps in index order taking every strictly improving
/// single flip; when none is left, takes the first strictly improving pair
/// flip and resumes. Stops at a 1- and 2-flip local minimum.
pub(crate) fn descend(model: &QuboModel, z: &mut [u8]) {
    let d = model.dim();
    let mut field: Vec<f64> = (0..d)
        .map(|i| {
            let row = model.row(i);
            (0..d).filter(|&j| j != i && z[j] == 1).map(|j| row[j]).sum()
        })
        .collect();
    loop {
        let mut improved = false;
        for i in 0..d {
            let sign = 1.0 - 2.0 * z[i] as f64;
            let delta = sign * (model.get(i, i) + 2.0 * field[i]);
            if delta < 0.0 {
                z[i] ^= 1;
                improved = true;
                let row = model.row(i);
                for (j, f) in field.iter_mut().enumerate() {
                    if j != i {
                        *f += sign * row[j];
                    }
                }
            }
        }
        if !improved {
            // no single flip helps; take the first improving pair, if any
            'outer: for i in 0..d {
                let si = 1.0 - 2.0 * z[i] as f64;
                let di = si * (model.get(i, i) + 2.0 * field[i]);
                for j in (i + 1)..d {
                    let sj = 1.0 - 2.0 * z[j] as f64;
                    let dj = sj * (model.get(j, j) + 2.0 * field[j]);
                    // Q is stored symmetric, so the pair term counts twice
                    if di + dj + 2.0 * si * sj * model.get(i, j) < 0.0 {
                        for (k, sk) in [(i, si), (j, sj)] {
                            z[k] ^= 1;
                            let row = model.row(k);
                            for (q, f) in field.iter_mut().enumerate() {
                                if q != k { *f += sk * row[q]; }
                            }
                        }
                        improved = true;
                        break 'outer;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
}

/// `sign` with zero mapped to +1.
#[inline]
pub(crate) fn spin_of(v: f64) -> u8 {
    (v >= 0.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solver_names_parse() {
        for kind in SolverKind::ALL {
            assert_eq!(kind.name().parse::<SolverKind>().unwrap(), kind);
        }
        assert!("dwave".parse::<SolverKind>().is_err());
    }

    #[test]
    fn attempt_streams_differ() {
        use rand::RngCore;
        let a = attempt_rng(1, 0).next_u64();
        let b = attempt_rng(1, 1).next_u64();
        let c = attempt_rng(2, 0).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, attempt_rng(1, 0).next_u64());
    }

    #[test]
    fn descent_ends_at_pair_local_minimum() {
        // 0b11 is the ground state, reachable from 0b00 only by a pair flip
        let model = QuboModel::from_upper(2, &[(0, 0, 1.0), (1, 1, 1.0), (0, 1, -4.0)], 0.0).unwrap();
        let mut z = vec![0u8, 0];
        descend(&model, &mut z);
        assert_eq!(z, vec![1, 1]);
        assert_eq!(model.energy(&z).unwrap(), -6.0);
    }

    #[test]
    fn zero_maps_to_plus_one() {
        assert_eq!(spin_of(0.0), 1);
        assert_eq!(spin_of(-0.0), 1);
        assert_eq!(spin_of(-1e-12), 0);
    }
}
