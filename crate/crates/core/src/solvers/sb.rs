use rand::Rng;

use super::{descend, run_attempts, spin_of, SolveResult, SolverConfig};
use crate::encoder::{qubo_to_ising, QuboModel};
use crate::error::Result;

/// Simulated bifurcation on the spin form of the model.
///
/// Positions `x` and momenta `y` follow the symplectic Euler steps
///
/// ```text
/// y_i += dt·(−(Δ − a(t))·x_i − c₀·(2·Σ_j J_ij s_j + h_i))
/// x_i += dt·Δ·y_i
/// ```
///
/// with `a(t)` ramped linearly from 0 to `Δ`, `c₀ = coupling / max_i(Σ_j |J_ij| + |h_i|)`
/// and inelastic walls at `|x_i| = 1`. The ballistic variant couples through
/// `s_j = x_j`, the discrete one through `s_j = sign(x_j)`. The field `h`
/// enters as a constant drive. The origin is a fixed point when `h = 0`, so
/// positions and momenta start uniformly in `[−init_amplitude, init_amplitude]`;
/// that draw is the only randomness.
pub fn solve_sb(model: &QuboModel, cfg: &SolverConfig) -> Result<SolveResult> {
    let ising = qubo_to_ising(model);
    let d = ising.dim();
    let p = cfg.sb;
    let scale = ising.force_scale();
    let c0 = if scale > 0.0 { p.coupling / scale } else { 0.0 };
    let steps = cfg.iterations;

    run_attempts(model, cfg, |rng| {
        let amp = p.init_amplitude;
        let mut draw = || if amp > 0.0 { rng.gen_range(-amp..=amp) } else { 0.0 };
        let mut x: Vec<f64> = (0..d).map(|_| draw()).collect();
        let mut y: Vec<f64> = (0..d).map(|_| draw()).collect();
        let mut s = vec![0.0f64; d];
        let mut force = vec![0.0f64; d];
        for t in 0..steps {
            let a_t = p.detuning * if steps > 1 { t as f64 / (steps - 1) as f64 } else { 1.0 };
            for (si, &xi) in s.iter_mut().zip(&x) {
                *si = if p.discrete { if xi >= 0.0 { 1.0 } else { -1.0 } } else { xi };
            }
            for (i, f) in force.iter_mut().enumerate() {
                let js: f64 = ising.coupling_row(i).iter().zip(&s).map(|(j, v)| j * v).sum();
                *f = -c0 * (2.0 * js + ising.h()[i]);
            }
            for i in 0..d {
                y[i] += p.dt * (-(p.detuning - a_t) * x[i] + force[i]);
                x[i] += p.dt * p.detuning * y[i];
                if x[i].abs() > 1.0 {
                    x[i] = x[i].signum();
                    y[i] = 0.0;
                }
            }
        }
        let mut z: Vec<u8> = x.iter().map(|&v| spin_of(v)).collect();
        if p.polish {
            descend(model, &mut z);
        }
        z
    })
}
