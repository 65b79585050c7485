use serde::{Deserialize, Serialize};

use super::qubo::QuboModel;
use crate::error::{Error, Result};

/// Spin form `E(σ) = σᵀ J σ + hᵀ σ + offset` with `J` symmetric and zero on the diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingModel {
    dim: usize,
    h: Vec<f64>,
    j: Vec<f64>,
    offset: f64,
}

impl IsingModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    #[inline]
    pub fn coupling(&self, a: usize, b: usize) -> f64 {
        self.j[a * self.dim + b]
    }

    #[inline]
    pub fn coupling_row(&self, a: usize) -> &[f64] {
        &self.j[a * self.dim..(a + 1) * self.dim]
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Energy of a spin configuration; entries must be ±1.
    pub fn energy(&self, spins: &[i8]) -> Result<f64> {
        if spins.len() != self.dim {
            return Err(Error::input(format!(
                "spin vector has length {}, model has {}",
                spins.len(),
                self.dim
            )));
        }
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::input("spins must be +1 or -1"));
        }
        let mut e = self.offset;
        for a in 0..self.dim {
            let sa = spins[a] as f64;
            e += self.h[a] * sa;
            let row = self.coupling_row(a);
            let mut acc = 0.0;
            for b in (a + 1)..self.dim {
                acc += row[b] * spins[b] as f64;
            }
            e += 2.0 * sa * acc;
        }
        Ok(e)
    }

    /// Largest absolute row sum of the couplings plus the field, a bound on the local force.
    pub fn force_scale(&self) -> f64 {
        (0..self.dim)
            .map(|a| {
                self.coupling_row(a).iter().map(|v| v.abs()).sum::<f64>() + self.h[a].abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Substitutes `z_i = (σ_i + 1)/2`.
///
/// `J_ij = Q_ij/4` off the diagonal, `h_i = ½ Σ_j Q_ij`, and the constant
/// collects `¼ Σ_ij Q_ij + ¼ Σ_i Q_ii` on top of the QUBO offset.
pub fn qubo_to_ising(model: &QuboModel) -> IsingModel {
    let d = model.dim();
    let mut j = vec![0.0; d * d];
    let mut h = vec![0.0; d];
    let mut total = 0.0;
    let mut diag = 0.0;
    for a in 0..d {
        let row = model.row(a);
        for b in 0..d {
            if a != b {
                j[a * d + b] = row[b] / 4.0;
            }
        }
        let row_sum: f64 = row.iter().sum();
        h[a] = row_sum / 2.0;
        total += row_sum;
        diag += row[a];
    }
    IsingModel {
        dim: d,
        h,
        j,
        offset: model.offset() + total / 4.0 + diag / 4.0,
    }
}

/// `σ = 2z − 1`.
pub fn bits_to_spins(z: &[u8]) -> Vec<i8> {
    z.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect()
}

/// `z = (σ + 1)/2`, with non-negative spins mapping to 1.
pub fn spins_to_bits(spins: &[i8]) -> Vec<u8> {
    spins.iter().map(|&s| (s >= 0) as u8).collect()
}
