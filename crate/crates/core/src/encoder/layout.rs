use serde::{Deserialize, Serialize};

use crate::problem::ProblemInstance;

/// Bits needed to represent every integer in `0..=v`.
pub(crate) fn bit_width(v: u64) -> usize {
    (u64::BITS - v.leading_zeros()) as usize
}

/// Flat indexing of the binary variables `x`, `y`, `a` (capacity slack) and
/// `b` (minimum-fill slack).
///
/// Blocks are laid out in that order:
///
/// ```text
/// x(i, j) = i*m + j                     i < n, j < m
/// y(j)    = n*m + j
/// a(l, j) = n*m + m + j*s + l           l < s
/// b(l, j) = n*m + m + m*s + j*k + l     l < k
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableLayout {
    pub n: usize,
    pub m: usize,
    /// Capacity slack width per canister.
    pub s: usize,
    /// Minimum-fill slack width per canister.
    pub k: usize,
    /// Whether the minimum-fill block is part of the Hamiltonian at all.
    /// It is dropped when `n_min == 1`; with `n_min == n` it is present with `k == 0`.
    pub has_min_fill: bool,
    pub dim: usize,
}

impl VariableLayout {
    #[inline]
    pub fn x(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.m);
        i * self.m + j
    }

    #[inline]
    pub fn y(&self, j: usize) -> usize {
        debug_assert!(j < self.m);
        self.n * self.m + j
    }

    #[inline]
    pub fn a(&self, l: usize, j: usize) -> usize {
        debug_assert!(l < self.s && j < self.m);
        self.n * self.m + self.m + j * self.s + l
    }

    #[inline]
    pub fn b(&self, l: usize, j: usize) -> usize {
        debug_assert!(l < self.k && j < self.m);
        self.n * self.m + self.m + self.m * self.s + j * self.k + l
    }

    /// Index of the first `a` bit of canister `j`.
    pub fn a_start(&self, j: usize) -> usize {
        self.n * self.m + self.m + j * self.s
    }

    pub fn b_start(&self, j: usize) -> usize {
        self.n * self.m + self.m + self.m * self.s + j * self.k
    }
}

/// Variable layout for an instance: `D = m(1 + n + s + k)`.
///
/// `s` is the bit width of `p_max` so an idle canister's slack (exactly
/// `p_max`) stays representable. `k` is zero when `n_min == 1`; otherwise it
/// is the bit width of `n - n_min`, the largest surplus a used canister can
/// hold over its minimum.
pub fn build_layout(inst: &ProblemInstance) -> VariableLayout {
    let (n, m) = (inst.n(), inst.m());
    let s = bit_width(inst.p_max());
    let has_min_fill = inst.n_min() > 1;
    let k = if has_min_fill {
        bit_width((n - inst.n_min()) as u64)
    } else {
        0
    };
    VariableLayout {
        n,
        m,
        s,
        k,
        has_min_fill,
        dim: m * (1 + n + s + k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(n: usize, m: usize, p_max: u64, n_min: usize) -> VariableLayout {
        let inst = ProblemInstance::new("t", m, vec![1; n], p_max, n_min).unwrap();
        build_layout(&inst)
    }

    #[test]
    fn sizes_from_table() {
        let trivial = layout(2, 2, 3, 1);
        assert_eq!((trivial.s, trivial.k, trivial.dim), (2, 0, 10));
        let ten = layout(10, 3, 15, 1);
        assert_eq!((ten.s, ten.k, ten.dim), (4, 0, 45));
        let four = layout(4, 3, 7, 1);
        assert_eq!((four.s, four.k, four.dim), (3, 0, 24));
    }

    #[test]
    fn slack_widths() {
        assert_eq!(bit_width(0), 0);
        assert_eq!(bit_width(1), 1);
        assert_eq!(bit_width(15), 4);
        assert_eq!(bit_width(16), 5);
        // p_max a power of two needs the extra bit
        assert_eq!(layout(2, 2, 16, 1).s, 5);
        let l = layout(6, 2, 3, 2);
        assert!(l.has_min_fill);
        assert_eq!(l.k, 3); // surplus up to 4
        let full = layout(3, 2, 3, 3);
        assert!(full.has_min_fill);
        assert_eq!(full.k, 0);
    }

    #[test]
    fn indices_are_a_bijection() {
        let l = layout(4, 3, 5, 2);
        let mut seen = vec![false; l.dim];
        let mut mark = |idx: usize| {
            assert!(!seen[idx], "index {idx} used twice");
            seen[idx] = true;
        };
        for i in 0..l.n {
            for j in 0..l.m {
                mark(l.x(i, j));
            }
        }
        for j in 0..l.m {
            mark(l.y(j));
            for b in 0..l.s {
                mark(l.a(b, j));
            }
            for b in 0..l.k {
                mark(l.b(b, j));
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
