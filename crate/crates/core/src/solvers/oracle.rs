use serde::{Deserialize, Serialize};

use crate::encoder::QuboModel;
use crate::error::{Error, Result};
use crate::problem::{Assignment, ProblemInstance};

/// Largest element count [`oracle_exact`] accepts.
pub const ORACLE_MAX_ELEMENTS: usize = 16;
/// Largest variable count [`brute_force_bits`] accepts.
pub const BRUTE_FORCE_MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub optimal_m: usize,
    pub witness: Assignment,
}

/// Minimum number of canisters, by exhaustive search over canonically
/// labeled placements.
///
/// Element `i` may only go to a canister already opened by an earlier
/// element or to the next unopened one, which removes the `m!` relabelings.
/// Branches that overflow a canister, cannot beat the incumbent, or can no
/// longer satisfy the minimum fill are cut; none of these cuts discards a
/// better feasible placement, so the result is exact.
pub fn oracle_exact(inst: &ProblemInstance) -> Result<OracleSolution> {
    if inst.n() > ORACLE_MAX_ELEMENTS {
        return Err(Error::TooLarge {
            what: "exact oracle",
            size: inst.n(),
            limit: ORACLE_MAX_ELEMENTS,
        });
    }
    let mut search = Search {
        inst,
        heat: vec![0; inst.m()],
        count: vec![0; inst.m()],
        current: vec![0; inst.n()],
        best_m: inst.m() + 1,
        best: None,
    };
    search.descend(0, 0);
    match search.best {
        Some(witness) => Ok(OracleSolution {
            optimal_m: search.best_m,
            witness: Assignment::new(witness).expect("n >= 1"),
        }),
        None => Err(Error::Infeasible),
    }
}

struct Search<'a> {
    inst: &'a ProblemInstance,
    heat: Vec<u64>,
    count: Vec<usize>,
    current: Vec<usize>,
    best_m: usize,
    best: Option<Vec<usize>>,
}

impl Search<'_> {
    fn deficit(&self, opened: usize) -> usize {
        let n_min = self.inst.n_min();
        self.count[..opened]
            .iter()
            .map(|&c| n_min.saturating_sub(c))
            .sum()
    }

    fn descend(&mut self, i: usize, opened: usize) {
        let n = self.inst.n();
        if self.deficit(opened) > n - i {
            return;
        }
        if i == n {
            // deficit is zero here, so every opened canister is filled enough
            if opened < self.best_m {
                self.best_m = opened;
                self.best = Some(self.current.clone());
            }
            return;
        }
        let p = self.inst.p()[i];
        let limit = (opened + 1).min(self.inst.m());
        for c in 0..limit {
            let opens = c == opened;
            if opens && opened + 1 >= self.best_m {
                continue;
            }
            if self.heat[c] + p > self.inst.p_max() {
                continue;
            }
            self.heat[c] += p;
            self.count[c] += 1;
            self.current[i] = c;
            self.descend(i + 1, opened + opens as usize);
            self.heat[c] -= p;
            self.count[c] -= 1;
        }
    }
}

/// Global minimum of a QUBO by enumerating all `2^D` bitstrings.
///
/// Walks the reflected Gray code so each step costs one column update.
/// Among equal energies the lexicographically smallest bitstring wins,
/// comparing `z[0]` first. The returned energy is recomputed from scratch.
pub fn brute_force_bits(model: &QuboModel) -> Result<(Vec<u8>, f64)> {
    let d = model.dim();
    if d > BRUTE_FORCE_MAX_DIM {
        return Err(Error::TooLarge {
            what: "brute-force enumeration",
            size: d,
            limit: BRUTE_FORCE_MAX_DIM,
        });
    }
    let mut z = vec![0u8; d];
    // field[i] = Σ_{j≠i} Q_ij z_j
    let mut field = vec![0.0f64; d];
    let mut e = model.offset();
    let mut best = z.clone();
    let mut best_e = e;

    for step in 1u64..(1u64 << d) {
        let flip = step.trailing_zeros() as usize;
        let sign = 1.0 - 2.0 * z[flip] as f64;
        e += sign * (model.get(flip, flip) + 2.0 * field[flip]);
        z[flip] ^= 1;
        let row = model.row(flip);
        for (i, f) in field.iter_mut().enumerate() {
            if i != flip {
                *f += sign * row[i];
            }
        }
        if e < best_e || (e == best_e && z < best) {
            best_e = e;
            best.copy_from_slice(&z);
        }
    }
    let exact = model.energy_unchecked(&best);
    Ok((best, exact))
}
