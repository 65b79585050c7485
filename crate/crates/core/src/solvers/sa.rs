use rand::Rng;

use super::{run_attempts, SolveResult, SolverConfig};
use crate::encoder::QuboModel;
use crate::error::Result;

/// Default schedule bounds from the matrix scale: `0.1 / mean|Q|` and `10 / min|Q|`
/// over nonzero upper-triangle entries.
pub(crate) fn default_betas(model: &QuboModel) -> (f64, f64) {
    let d = model.dim();
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut min = f64::INFINITY;
    for i in 0..d {
        for &v in &model.row(i)[i..] {
            if v != 0.0 {
                sum += v.abs();
                count += 1;
                min = min.min(v.abs());
            }
        }
    }
    if count == 0 {
        return (1.0, 1.0);
    }
    (0.1 / (sum / count as f64), 10.0 / min)
}

/// Single-flip Metropolis annealing under a geometric inverse-temperature
/// schedule, one sweep over all variables per iteration.
///
/// Local fields `Σ_{j≠i} Q_ij z_j` are cached, so a flip costs one row
/// update. Each attempt reports the lowest-energy state it visited.
pub fn solve_sa(model: &QuboModel, cfg: &SolverConfig) -> Result<SolveResult> {
    let d = model.dim();
    let (auto_start, auto_end) = default_betas(model);
    let beta_start = cfg.sa.beta_start.unwrap_or(auto_start);
    let beta_end = cfg.sa.beta_end.unwrap_or(auto_end);
    let sweeps = cfg.iterations;
    let ratio = if sweeps > 1 {
        (beta_end / beta_start).powf(1.0 / (sweeps - 1) as f64)
    } else {
        1.0
    };

    run_attempts(model, cfg, |rng| {
        let mut z: Vec<u8> = (0..d).map(|_| rng.gen_range(0..=1u8)).collect();
        let mut field: Vec<f64> = (0..d)
            .map(|i| {
                let row = model.row(i);
                (0..d).filter(|&j| j != i && z[j] == 1).map(|j| row[j]).sum()
            })
            .collect();
        let mut e = model.energy_unchecked(&z);
        let mut best = z.clone();
        let mut best_e = e;

        let mut beta = beta_start;
        for _ in 0..sweeps {
            for i in 0..d {
                let sign = 1.0 - 2.0 * z[i] as f64;
                let delta = sign * (model.get(i, i) + 2.0 * field[i]);
                if delta <= 0.0 || rng.gen::<f64>() < (-beta * delta).exp() {
                    z[i] ^= 1;
                    e += delta;
                    let row = model.row(i);
                    for (j, f) in field.iter_mut().enumerate() {
                        if j != i {
                            *f += sign * row[j];
                        }
                    }
                    if e < best_e {
                        best_e = e;
                        best.copy_from_slice(&z);
                    }
                }
            }
            beta *= ratio;
        }
        best
    })
}
