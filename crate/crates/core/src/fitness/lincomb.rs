//! Recursive generation of all linear combinations of at most `t` rows.
//!
//! With `B_v` the combinations of exactly `v` rows, adding a row `m` to a
//! set of rows maps `B_v` to `B_v ∪ (B_{v-1} + m)`. Processing rows one at a
//! time and `v` downwards, every combination of two or more rows costs one
//! row addition and nothing is recomputed.

use crate::error::{invalid_arg, Result};
use crate::f2::{BitVec, F2Matrix};
use crate::pauli::PackedPauli;

/// One linear combination: the coefficient vector and the resulting row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinComb {
    pub coefficients: BitVec,
    pub row: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinCombSet {
    pub source: F2Matrix,
    pub depth: usize,
    /// Grouped by coefficient weight, `0..=depth`.
    pub combos: Vec<LinComb>,
    /// GF(2) row additions performed while building the set.
    pub additions: u64,
}

impl LinCombSet {
    pub fn len(&self) -> usize {
        self.combos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.combos.is_empty()
    }
}

/// Element of a combination level; the sum of two elements is one addition.
pub(crate) trait Combine: Clone {
    fn unit(&self, index: usize) -> Self;
    fn plus(&self, row: &Self, index: usize) -> Self;
}

/// Levels `B_0..=B_t` of the combinations of `rows`, and the addition count.
pub(crate) fn build_levels<E: Combine>(rows: &[E], zero: E, t: usize) -> (Vec<Vec<E>>, u64) {
    let mut levels: Vec<Vec<E>> = vec![Vec::new(); t + 1];
    levels[0].push(zero);
    let mut additions = 0u64;
    for (i, row) in rows.iter().enumerate() {
        let top = t.min(i + 1);
        for v in (1..=top).rev() {
            let (lower, upper) = levels.split_at_mut(v);
            let prev = &lower[v - 1];
            let out = &mut upper[0];
            out.reserve(prev.len());
            if v == 1 {
                out.push(row.unit(i));
            } else {
                for x in prev {
                    out.push(x.plus(row, i));
                }
                additions += prev.len() as u64;
            }
        }
    }
    (levels, additions)
}

#[derive(Clone)]
struct Tagged {
    coeffs: BitVec,
    row: BitVec,
}

impl Combine for Tagged {
    fn unit(&self, index: usize) -> Self {
        let mut out = self.clone();
        out.coeffs = BitVec::zeros(self.coeffs.len());
        out.coeffs.set(index, true);
        out
    }

    fn plus(&self, row: &Self, index: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.set(index, true);
        out.row.xor_assign(&row.row);
        out
    }
}

/// Packed combination: coefficient bits and operator, for at most 128 rows
/// on at most 64 qubits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct PackedComb {
    pub coeffs: u128,
    pub op: PackedPauli,
}

impl Combine for PackedComb {
    fn unit(&self, index: usize) -> Self {
        PackedComb {
            coeffs: 1 << index,
            op: self.op,
        }
    }

    fn plus(&self, row: &Self, index: usize) -> Self {
        PackedComb {
            coeffs: self.coeffs | 1 << index,
            op: self.op.xor(row.op),
        }
    }
}

/// All combinations of at most `t` rows of `m`, including the empty one.
pub fn lincombs_up_to(m: &F2Matrix, t: usize) -> Result<LinCombSet> {
    let r = m.nrows();
    if t > r {
        return Err(invalid_arg(format!("depth {t} exceeds the {r} available rows")));
    }
    let rows: Vec<Tagged> = m
        .rows_iter()
        .map(|row| Tagged {
            coeffs: BitVec::zeros(r),
            row,
        })
        .collect();
    let zero = Tagged {
        coeffs: BitVec::zeros(r),
        row: BitVec::zeros(m.ncols()),
    };
    let (levels, additions) = build_levels(&rows, zero, t);
    let combos = levels
        .into_iter()
        .flatten()
        .map(|e| LinComb {
            coefficients: e.coeffs,
            row: e.row,
        })
        .collect();
    Ok(LinCombSet {
        source: m.clone(),
        depth: t,
        combos,
        additions,
    })
}

/// `sum_{1 < v <= t} C(r, v)`.
pub fn expected_additions(r: usize, t: usize) -> u64 {
    (2..=t.min(r)).map(|v| binomial(r, v)).sum()
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> F2Matrix {
        F2Matrix::from_fn(rows, cols, |_, _| rng.gen())
    }

    #[test]
    fn power_set_of_three_rows() {
        let m = F2Matrix::parse_text("100\n010\n001").unwrap();
        let set = lincombs_up_to(&m, 3).unwrap();
        assert_eq!(set.len(), 8);
        let rows: BTreeSet<String> = set.combos.iter().map(|c| c.row.to_string()).collect();
        assert_eq!(rows.len(), 8);
        assert_eq!(set.additions, 4);
    }

    #[test]
    fn five_rows_depth_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let set = lincombs_up_to(&random_matrix(&mut rng, 5, 9), 2).unwrap();
        assert_eq!(set.len(), 16);
        assert_eq!(set.additions, 10);
    }

    #[test]
    fn depth_zero_and_empty_source() {
        let m = F2Matrix::parse_text("11\n01").unwrap();
        let set = lincombs_up_to(&m, 0).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.combos[0].row.is_zero());
        assert!(lincombs_up_to(&m, 3).is_err());
        assert_eq!(lincombs_up_to(&F2Matrix::zeros(0, 4), 0).unwrap().len(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(expected_additions(5, 2), 10);
        assert_eq!(expected_additions(3, 3), 4);
    }

    #[test]
    fn packed_levels_match() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random_matrix(&mut rng, 7, 10);
        let rows: Vec<PackedComb> = m
            .rows_iter()
            .map(|r| PackedComb {
                coeffs: 0,
                op: PackedPauli::from_row(&r),
            })
            .collect();
        let (levels, adds) = build_levels(&rows, PackedComb::default(), 4);
        let set = lincombs_up_to(&m, 4).unwrap();
        assert_eq!(adds, set.additions);
        let packed: BTreeSet<(u128, u64, u64)> = levels
            .iter()
            .flatten()
            .map(|c| (c.coeffs, c.op.x, c.op.z))
            .collect();
        let plain: BTreeSet<(u128, u64, u64)> = set
            .combos
            .iter()
            .map(|c| {
                let coeffs = c.coefficients.iter_ones().fold(0u128, |a, i| a | 1 << i);
                let p = PackedPauli::from_row(&c.row);
                (coeffs, p.x, p.z)
            })
            .collect();
        assert_eq!(packed, plain);
    }
}
