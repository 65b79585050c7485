use serde::{Deserialize, Serialize};

use super::layout::{build_layout, VariableLayout};
use crate::error::{Error, Result};
use crate::problem::ProblemInstance;

/// Objective scale `A` and penalty scale `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub a_weight: f64,
    pub b_weight: f64,
}

impl PenaltyWeights {
    pub fn new(a_weight: f64, b_weight: f64) -> Result<Self> {
        if !(a_weight > 0.0 && a_weight.is_finite()) || !(b_weight > 0.0 && b_weight.is_finite())
        {
            return Err(Error::input(format!(
                "penalty weights must be positive and finite (A = {a_weight}, B = {b_weight})"
            )));
        }
        Ok(PenaltyWeights { a_weight, b_weight })
    }

    /// `A = 1`, `B = 2·A·m`.
    ///
    /// Any penalized bitstring then costs at least `B > A·M` for every
    /// reachable objective `M <= m`.
    pub fn default_for(inst: &ProblemInstance) -> Self {
        PenaltyWeights {
            a_weight: 1.0,
            b_weight: 2.0 * inst.m() as f64,
        }
    }
}

/// What a model encodes, when it came from [`build_qubo`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoding {
    pub layout: VariableLayout,
    pub weights: PenaltyWeights,
}

/// Dense symmetric QUBO, `E(z) = zᵀ Q z + offset`.
///
/// Linear terms live on the diagonal. A pairwise coefficient `c·z_i·z_j`
/// is stored as `c/2` in both `Q[i][j]` and `Q[j][i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboModel {
    dim: usize,
    q: Vec<f64>,
    offset: f64,
    encoding: Option<Encoding>,
}

impl QuboModel {
    /// Model from a row-major dense matrix, which must be exactly symmetric.
    pub fn from_dense(dim: usize, q: Vec<f64>, offset: f64) -> Result<Self> {
        if q.len() != dim * dim {
            return Err(Error::input(format!(
                "matrix has {} entries, expected {dim}x{dim}",
                q.len()
            )));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if q[i * dim + j] != q[j * dim + i] {
                    return Err(Error::input(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        if q.iter().any(|v| !v.is_finite()) || !offset.is_finite() {
            return Err(Error::input("matrix entries and offset must be finite"));
        }
        Ok(QuboModel {
            dim,
            q,
            offset,
            encoding: None,
        })
    }

    /// Symmetrizes an arbitrary square matrix, `(Q + Qᵀ)/2`, which leaves the energy unchanged.
    pub fn from_upper(dim: usize, upper: &[(usize, usize, f64)], offset: f64) -> Result<Self> {
        let mut b = Builder::new(dim);
        b.offset = offset;
        for &(i, j, v) in upper {
            if i >= dim || j >= dim {
                return Err(Error::input(format!("entry ({i}, {j}) outside {dim}x{dim}")));
            }
            if i == j {
                b.linear(i, v);
            } else {
                b.pair(i, j, 2.0 * v);
            }
        }
        QuboModel::from_dense(dim, b.q, b.offset)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.q[i * self.dim + j]
    }

    /// Row `i` of the matrix.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.q[i * self.dim..(i + 1) * self.dim]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn encoding(&self) -> Option<&Encoding> {
        self.encoding.as_ref()
    }

    pub fn layout(&self) -> Option<&VariableLayout> {
        self.encoding.as_ref().map(|e| &e.layout)
    }

    pub fn weights(&self) -> Option<&PenaltyWeights> {
        self.encoding.as_ref().map(|e| &e.weights)
    }

    pub(crate) fn check_bits(&self, z: &[u8]) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::input(format!(
                "bitstring has length {}, model has {} variables",
                z.len(),
                self.dim
            )));
        }
        if let Some(i) = z.iter().position(|&b| b > 1) {
            return Err(Error::input(format!("bit {i} is not 0 or 1")));
        }
        Ok(())
    }

    /// `zᵀ Q z + offset`.
    pub fn energy(&self, z: &[u8]) -> Result<f64> {
        self.check_bits(z)?;
        Ok(self.energy_unchecked(z))
    }

    pub(crate) fn energy_unchecked(&self, z: &[u8]) -> f64 {
        let ones: Vec<usize> = (0..self.dim).filter(|&i| z[i] == 1).collect();
        let mut e = 0.0;
        for &i in &ones {
            let row = self.row(i);
            e += row[i];
            for &j in &ones {
                if j > i {
                    e += 2.0 * row[j];
                }
            }
        }
        e + self.offset
    }

    /// Energy minus the objective part `A·Σ y_j`, i.e. `B·(H1 + H2 + H3 + H4)`.
    pub fn penalty(&self, z: &[u8]) -> Result<f64> {
        let enc = self
            .encoding
            .as_ref()
            .ok_or_else(|| Error::input("penalty needs a model built from an instance"))?;
        let e = self.energy(z)?;
        let used: usize = (0..enc.layout.m)
            .map(|j| z[enc.layout.y(j)] as usize)
            .sum();
        Ok(e - enc.weights.a_weight * used as f64)
    }
}

/// Accumulates polynomial terms into a symmetric matrix.
struct Builder {
    dim: usize,
    q: Vec<f64>,
    offset: f64,
}

impl Builder {
    fn new(dim: usize) -> Self {
        Builder {
            dim,
            q: vec![0.0; dim * dim],
            offset: 0.0,
        }
    }

    fn linear(&mut self, i: usize, c: f64) {
        self.q[i * self.dim + i] += c;
    }

    fn pair(&mut self, i: usize, j: usize, c: f64) {
        debug_assert_ne!(i, j);
        self.q[i * self.dim + j] += c / 2.0;
        self.q[j * self.dim + i] += c / 2.0;
    }

    /// Adds `scale·(Σ c_k z_k + constant)²` over distinct variables.
    fn square(&mut self, terms: &[(usize, f64)], constant: f64, scale: f64) {
        for (idx, &(i, ci)) in terms.iter().enumerate() {
            self.linear(i, scale * (ci * ci + 2.0 * constant * ci));
            for &(j, cj) in &terms[idx + 1..] {
                self.pair(i, j, scale * 2.0 * ci * cj);
            }
        }
        self.offset += scale * constant * constant;
    }
}

/// Builds `A·Σ y_j + B·(H1 + H2 + H3 + H4)`.
///
/// * `H1 = Σ_j (Σ_i p_i x_ij + Σ_l 2^l a_lj − p_max)²` (capacity)
/// * `H2 = Σ_i (Σ_j x_ij − 1)²` (one canister per element)
/// * `H3 = Σ_j (Σ_i x_ij − Σ_l 2^l b_lj − n_min·y_j)²` (minimum fill, only if `n_min > 1`)
/// * `H4 = Σ_ij x_ij (1 − y_j)` (elements only in used canisters)
pub fn build_qubo(inst: &ProblemInstance, weights: PenaltyWeights) -> QuboModel {
    let layout = build_layout(inst);
    let (n, m) = (layout.n, layout.m);
    let (a, b) = (weights.a_weight, weights.b_weight);
    let mut q = Builder::new(layout.dim);

    for j in 0..m {
        q.linear(layout.y(j), a);
    }

    let mut terms = Vec::with_capacity(n + layout.s.max(layout.k) + 1);
    for j in 0..m {
        terms.clear();
        terms.extend((0..n).map(|i| (layout.x(i, j), inst.p()[i] as f64)));
        terms.extend((0..layout.s).map(|l| (layout.a(l, j), (1u64 << l) as f64)));
        q.square(&terms, -(inst.p_max() as f64), b);
    }

    for i in 0..n {
        terms.clear();
        terms.extend((0..m).map(|j| (layout.x(i, j), 1.0)));
        q.square(&terms, -1.0, b);
    }

    if layout.has_min_fill {
        for j in 0..m {
            terms.clear();
            terms.extend((0..n).map(|i| (layout.x(i, j), 1.0)));
            terms.extend((0..layout.k).map(|l| (layout.b(l, j), -((1u64 << l) as f64))));
            terms.push((layout.y(j), -(inst.n_min() as f64)));
            q.square(&terms, 0.0, b);
        }
    }

    for i in 0..n {
        for j in 0..m {
            q.linear(layout.x(i, j), b);
            q.pair(layout.x(i, j), layout.y(j), -b);
        }
    }

    QuboModel {
        dim: layout.dim,
        q: q.q,
        offset: q.offset,
        encoding: Some(Encoding { layout, weights }),
    }
}

/// The Hamiltonian's parts evaluated straight from their definitions, without the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HamiltonianTerms {
    pub used: u64,
    pub capacity: u64,
    pub one_hot: u64,
    pub min_fill: u64,
    pub binding: u64,
}

impl HamiltonianTerms {
    /// `H1 + H2 + H3 + H4`.
    pub fn penalty_units(&self) -> u64 {
        self.capacity + self.one_hot + self.min_fill + self.binding
    }

    pub fn energy(&self, w: &PenaltyWeights) -> f64 {
        w.a_weight * self.used as f64 + w.b_weight * self.penalty_units() as f64
    }
}

pub fn hamiltonian_terms(
    inst: &ProblemInstance,
    layout: &VariableLayout,
    z: &[u8],
) -> Result<HamiltonianTerms> {
    if z.len() != layout.dim {
        return Err(Error::input(format!(
            "bitstring has length {}, layout has {} variables",
            z.len(),
            layout.dim
        )));
    }
    let bit = |idx: usize| z[idx] as i64;
    let mut t = HamiltonianTerms::default();
    let sq = |v: i64| (v * v) as u64;

    for j in 0..layout.m {
        t.used += bit(layout.y(j)) as u64;

        let load: i64 = (0..layout.n)
            .map(|i| inst.p()[i] as i64 * bit(layout.x(i, j)))
            .sum();
        let slack: i64 = (0..layout.s).map(|l| bit(layout.a(l, j)) << l).sum();
        t.capacity += sq(load + slack - inst.p_max() as i64);

        if layout.has_min_fill {
            let count: i64 = (0..layout.n).map(|i| bit(layout.x(i, j))).sum();
            let surplus: i64 = (0..layout.k).map(|l| bit(layout.b(l, j)) << l).sum();
            t.min_fill += sq(count - surplus - inst.n_min() as i64 * bit(layout.y(j)));
        }

        for i in 0..layout.n {
            t.binding += (bit(layout.x(i, j)) * (1 - bit(layout.y(j)))) as u64;
        }
    }
    for i in 0..layout.n {
        let placed: i64 = (0..layout.m).map(|j| bit(layout.x(i, j))).sum();
        t.one_hot += sq(placed - 1);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> ProblemInstance {
        ProblemInstance::new("trivial", 2, vec![1, 1], 3, 1).unwrap()
    }

    #[test]
    fn all_zero_energy_is_offset() {
        let inst = trivial();
        let model = build_qubo(&inst, PenaltyWeights::new(1.0, 1.0).unwrap());
        assert_eq!(model.dim(), 10);
        // B·(m·p_max² + n) = 2·9 + 2
        assert_eq!(model.energy(&[0; 10]).unwrap(), 20.0);
        assert_eq!(model.offset(), 20.0);
    }

    #[test]
    fn matrix_is_symmetric() {
        let inst = ProblemInstance::new("t", 3, vec![3, 5, 2, 4], 7, 2).unwrap();
        let model = build_qubo(&inst, PenaltyWeights::default_for(&inst));
        let d = model.dim();
        for i in 0..d {
            for j in 0..d {
                assert_eq!(model.get(i, j), model.get(j, i));
            }
        }
    }

    #[test]
    fn entries_are_integers_for_even_penalty() {
        let inst = ProblemInstance::new("t", 3, vec![3, 5, 2, 4], 7, 2).unwrap();
        let model = build_qubo(&inst, PenaltyWeights::new(1.0, 6.0).unwrap());
        assert!(model.matrix().iter().all(|v| v.fract() == 0.0));
        assert_eq!(model.offset().fract(), 0.0);
    }

    #[test]
    fn energy_rejects_bad_bits() {
        let model = build_qubo(&trivial(), PenaltyWeights::new(1.0, 1.0).unwrap());
        assert!(model.energy(&[0; 9]).is_err());
        let mut z = vec![0u8; 10];
        z[3] = 2;
        assert!(model.energy(&z).is_err());
    }

    #[test]
    fn from_dense_checks_symmetry() {
        assert!(QuboModel::from_dense(2, vec![1.0, 2.0, 3.0, 4.0], 0.0).is_err());
        assert!(QuboModel::from_dense(2, vec![1.0, 2.0, 2.0], 0.0).is_err());
        let m = QuboModel::from_dense(2, vec![1.0, 2.0, 2.0, 4.0], 0.5).unwrap();
        // 1 + 4 + 2·2 + 0.5
        assert_eq!(m.energy(&[1, 1]).unwrap(), 9.5);
    }

    #[test]
    fn from_upper_symmetrizes() {
        let m = QuboModel::from_upper(2, &[(0, 0, 1.0), (0, 1, 3.0), (1, 1, -2.0)], 0.0).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.energy(&[1, 1]).unwrap(), 1.0 - 2.0 + 6.0);
    }
}
