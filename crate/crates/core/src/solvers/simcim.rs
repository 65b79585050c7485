use rand::Rng;
use rand_distr::StandardNormal;

use super::{descend, run_attempts, spin_of, SolveResult, SolverConfig};
use crate::encoder::{qubo_to_ising, QuboModel};
use crate::error::Result;

/// Simulated coherent Ising machine on the spin form of the model.
///
/// Amplitudes `c_i ∈ [−1, 1]` start at zero and evolve as
///
/// ```text
/// c_i ← clamp(c_i + dt·(ν(t)·c_i − ζ·∂E/∂c_i) + η·N(0, 1), −1, 1)
/// ∂E/∂c_i = 2·Σ_j J_ij c_j + h_i
/// ```
///
/// with the pump `ν` ramped linearly from `pump_start` to `pump_end` and
/// `ζ = coupling / max_i(Σ_j |J_ij| + |h_i|)`. Spins are read off as
/// `sign(c_i)` after the last step, optionally followed by descent.
pub fn solve_simcim(model: &QuboModel, cfg: &SolverConfig) -> Result<SolveResult> {
    let ising = qubo_to_ising(model);
    let d = ising.dim();
    let p = cfg.simcim;
    let scale = ising.force_scale();
    let zeta = if scale > 0.0 { p.coupling / scale } else { 0.0 };
    let steps = cfg.iterations;

    run_attempts(model, cfg, |rng| {
        let mut c = vec![0.0f64; d];
        let mut grad = vec![0.0f64; d];
        for t in 0..steps {
            let frac = if steps > 1 { t as f64 / (steps - 1) as f64 } else { 1.0 };
            let pump = p.pump_start + (p.pump_end - p.pump_start) * frac;
            for (a, g) in grad.iter_mut().enumerate() {
                let row = ising.coupling_row(a);
                let s: f64 = row.iter().zip(&c).map(|(j, x)| j * x).sum();
                *g = 2.0 * s + ising.h()[a];
            }
            for a in 0..d {
                let kick = if p.noise > 0.0 {
                    p.noise * rng.sample::<f64, _>(StandardNormal)
                } else {
                    0.0
                };
                c[a] = (c[a] + p.dt * (pump * c[a] - zeta * grad[a]) + kick).clamp(-1.0, 1.0);
            }
        }
        let mut z: Vec<u8> = c.iter().map(|&x| spin_of(x)).collect();
        if p.polish {
            descend(model, &mut z);
        }
        z
    })
}
