//! Reduction of an arbitrary commuting check matrix to canonical form.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::f2::F2Matrix;

use super::code::CanonicalCode;
use super::shape::CodeShape;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EchelonReport {
    pub rank: usize,
    /// Independent checks containing an X or Y factor.
    pub r: usize,
    /// Independent Z-only checks.
    pub s: usize,
    pub k: usize,
    /// Input rows that were linearly dependent on the others.
    pub dependent_rows: usize,
    /// True when the reduced code has `C1 = 0` and `M = 0`.
    pub css: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub canonical: CanonicalCode,
    /// `permutation[q]` is the standard-form position of input qubit `q`;
    /// `F2Matrix::permute_qubits(&permutation)` maps standard-form matrices
    /// back onto the input's qubit order.
    pub permutation: Vec<usize>,
    pub report: EchelonReport,
}

impl StandardForm {
    pub fn is_identity_permutation(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Maps a `2n`-column matrix in standard-form qubit order back to the
    /// input's qubit order.
    pub fn restore_order(&self, m: &F2Matrix) -> Result<F2Matrix> {
        m.permute_qubits(&self.permutation)
    }
}

fn swap_qubits(m: &mut F2Matrix, n: usize, a: usize, b: usize) {
    m.swap_cols(a, b);
    m.swap_cols(n + a, n + b);
}

fn eliminate(m: &mut F2Matrix, pivot_row: usize, col: usize) {
    for r in 0..m.nrows() {
        if r != pivot_row && m.get(r, col) {
            m.xor_row(r, pivot_row);
        }
    }
}

/// Gaussian elimination with qubit swaps into the `(I A1 A2 | B 0 C1; 0 0 0 |
/// D I C2)` layout, then extraction of `(C, A, M)`.
pub fn standard_form(raw: &F2Matrix) -> Result<StandardForm> {
    if raw.ncols() % 2 != 0 || raw.ncols() == 0 {
        return Err(invalid_arg("check matrix needs 2n > 0 columns"));
    }
    let n = raw.ncols() / 2;
    let gram = raw.symplectic_gram(raw)?;
    for i in 0..raw.nrows() {
        for j in i + 1..raw.nrows() {
            if gram.get(i, j) {
                return Err(Error::NonCommuting { first: i, second: j });
            }
        }
    }

    let mut m = raw.clone();
    let rows = m.nrows();
    // order[p] = input qubit currently at position p
    let mut order: Vec<usize> = (0..n).collect();

    let mut r = 0;
    while r < n && r < rows {
        let found = (r..n).find_map(|q| (r..rows).find(|&row| m.get(row, q)).map(|row| (q, row)));
        let Some((q, row)) = found else { break };
        if q != r {
            swap_qubits(&mut m, n, r, q);
            order.swap(r, q);
        }
        m.swap_rows(r, row);
        eliminate(&mut m, r, r);
        r += 1;
    }

    let mut s = 0;
    while r + s < n && r + s < rows {
        let pos = r + s;
        let found = (pos..n)
            .find_map(|q| (pos..rows).find(|&row| m.get(row, n + q)).map(|row| (q, row)));
        let Some((q, row)) = found else { break };
        if q != pos {
            swap_qubits(&mut m, n, pos, q);
            order.swap(pos, q);
        }
        m.swap_rows(pos, row);
        eliminate(&mut m, pos, n + pos);
        s += 1;
    }

    let rank = r + s;
    debug_assert!((rank..rows).all(|row| m.row_is_zero(row)));
    if rank >= n {
        return Err(Error::InvalidInput("check matrix has full rank; it encodes no logical qubits".into()));
    }
    let k = n - rank;

    let a = m.submatrix(0..r, r..n);
    let b = m.submatrix(0..r, n..n + r);
    let mut c = F2Matrix::zeros(n - k, k);
    c.set_block(0, 0, &m.submatrix(0..r, n + n - k..2 * n));
    c.set_block(r, 0, &m.submatrix(r..rank, n + n - k..2 * n));
    let a2 = m.submatrix(0..r, n - k..n);
    let c1 = c.submatrix(0..r, 0..k);
    let mm = b.add(&c1.mul(&a2.transpose())?)?;
    debug_assert_eq!(mm, mm.transpose(), "commuting rows give a symmetric M");

    let has_diag = (0..r).any(|i| mm.get(i, i));
    let shape = CodeShape::new(n, k, r)?.with_m_diagonal(has_diag);
    let css = c1.is_zero() && mm.is_zero();
    let canonical = CanonicalCode::new(shape, c, a, mm)?;

    let mut permutation = vec![0; n];
    for (pos, &q) in order.iter().enumerate() {
        permutation[q] = pos;
    }
    Ok(StandardForm {
        canonical,
        permutation,
        report: EchelonReport {
            rank,
            r,
            s,
            k,
            dependent_rows: rows - rank,
            css,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::RowSpace;
    use crate::genome::code::build_code;
    use crate::genome::genotype::CodeGenotype;
    use crate::pauli::PauliOp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn same_span(a: &F2Matrix, b: &F2Matrix) -> bool {
        a.rank() == b.rank() && a.vstack(b).unwrap().rank() == a.rank()
    }

    fn five_qubit_raw() -> F2Matrix {
        let rows: Vec<_> = ["IXZZX", "XIXZZ", "ZXIXZ", "ZZXIX", "XZZXI"]
            .iter()
            .map(|s| s.parse::<PauliOp>().unwrap().to_vector())
            .collect();
        F2Matrix::from_rows(10, &rows)
    }

    #[test]
    fn five_qubit_example() {
        let sf = standard_form(&five_qubit_raw()).unwrap();
        assert!(sf.is_identity_permutation());
        let c = &sf.canonical;
        assert_eq!((sf.report.r, sf.report.s, sf.report.k), (4, 0, 1));
        assert_eq!(sf.report.dependent_rows, 1);
        assert_eq!(c.a2().to_string(), "1\n1\n1\n1\n");
        assert_eq!(c.c1().to_string(), "1\n0\n0\n1\n");
        assert_eq!(c.b().to_string(), "1101\n0011\n1100\n1011\n");
        assert_eq!(c.m.to_string(), "0010\n0011\n1100\n0100\n");
        assert!(!c.shape.include_m_diagonal);
    }

    #[test]
    fn standard_form_is_a_fixed_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = rng.gen_range(2..9);
            let k = rng.gen_range(1..n);
            let r = rng.gen_range(0..=n - k);
            let shape = CodeShape::new(n, k, r).unwrap().with_m_diagonal(true);
            let canon = CodeGenotype::random(shape, &mut rng).decode();
            let sf = standard_form(&build_code(&canon).s).unwrap();
            assert!(sf.is_identity_permutation());
            assert_eq!(sf.canonical.c, canon.c);
            assert_eq!(sf.canonical.a, canon.a);
            assert_eq!(sf.canonical.m, canon.m);
        }
    }

    #[test]
    fn roundtrip_through_scrambled_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(2..10);
            let k = rng.gen_range(1..n);
            let r = rng.gen_range(0..=n - k);
            let shape = CodeShape::new(n, k, r).unwrap().with_m_diagonal(true);
            let code = build_code(&CodeGenotype::random(shape, &mut rng).decode());
            // scramble rows, add redundancy, permute qubits
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut raw = code.s.permute_qubits(&perm).unwrap();
            for _ in 0..3 {
                let (a, b) = (rng.gen_range(0..raw.nrows()), rng.gen_range(0..raw.nrows()));
                if a != b {
                    raw.xor_row(a, b);
                }
            }
            let extra = raw.row(0);
            raw.push_row(&extra);

            let sf = standard_form(&raw).unwrap();
            assert_eq!(sf.report.k, k);
            let rebuilt = build_code(&sf.canonical);
            let restored = sf.restore_order(&rebuilt.s).unwrap();
            assert!(same_span(&restored, &raw));
            let space = RowSpace::from_matrix(&raw);
            assert_eq!(space.dim(), n - k);
        }
    }

    #[test]
    fn rejects_non_commuting_rows() {
        let rows: Vec<_> = ["XI", "ZI"]
            .iter()
            .map(|s| s.parse::<PauliOp>().unwrap().to_vector())
            .collect();
        let m = F2Matrix::from_rows(4, &rows);
        assert_eq!(
            standard_form(&m),
            Err(Error::NonCommuting { first: 0, second: 1 })
        );
    }

    #[test]
    fn detects_css_and_swaps_when_needed() {
        // No X pivot on qubit 0, so qubits 0 and 2 get swapped.
        let rows: Vec<_> = ["ZZII", "IIXX"]
            .iter()
            .map(|s| s.parse::<PauliOp>().unwrap().to_vector())
            .collect();
        let raw = F2Matrix::from_rows(8, &rows);
        let sf = standard_form(&raw).unwrap();
        assert!(!sf.is_identity_permutation());
        assert_eq!((sf.report.r, sf.report.s, sf.report.k), (1, 1, 2));
        let rebuilt = sf.restore_order(&build_code(&sf.canonical).s).unwrap();
        assert!(same_span(&rebuilt, &raw));
    }
}
