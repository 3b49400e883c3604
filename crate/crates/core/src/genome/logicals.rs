//! Enumeration of non-trivial logical operators and exact code distance.

use crate::error::{invalid_arg, Error, Result};
use crate::f2::F2Matrix;
use crate::pauli::{ErrorModel, PackedPauli};
use crate::scalar::{CompensatedSum, Real};

use super::code::StabiliserCode;

/// Largest `n + k` for which [`distance_exact`] will enumerate.
pub const DISTANCE_ENUMERATION_CAP: usize = 26;

/// Counts of operators by their numbers of X, Y and Z factors.
///
/// Under an i.i.d. Pauli channel the probability of an operator depends only
/// on these counts, so a histogram is a lossless summary for both distance
/// and undetectable error rate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeHistogram {
    n: usize,
    counts: Vec<u64>,
}

impl TypeHistogram {
    pub fn new(n: usize) -> Self {
        TypeHistogram {
            n,
            counts: vec![0; (n + 1).pow(3)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, nx: usize, ny: usize, nz: usize) -> usize {
        let m = self.n + 1;
        (nx * m + ny) * m + nz
    }

    #[inline]
    pub(crate) fn add_packed(&mut self, p: PackedPauli) {
        let (nx, ny, nz) = p.counts();
        let i = self.index(nx, ny, nz);
        self.counts[i] += 1;
    }

    pub fn count(&self, nx: usize, ny: usize, nz: usize) -> u64 {
        self.counts[self.index(nx, ny, nz)]
    }

    /// Non-empty buckets as `((nx, ny, nz), count)`.
    pub fn buckets(&self) -> impl Iterator<Item = ((usize, usize, usize), u64)> + '_ {
        let m = self.n + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| ((i / (m * m), (i / m) % m, i % m), c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.buckets().map(|((x, y, z), _)| x + y + z).min()
    }

    /// Counts by weight `0..=n`.
    pub fn weight_distribution(&self) -> Vec<u64> {
        let mut out = vec![0; self.n + 1];
        for ((x, y, z), c) in self.buckets() {
            out[x + y + z] += c;
        }
        out
    }

    /// Total probability of the counted operators. Terms are accumulated in
    /// descending probability order with compensation.
    pub fn probability<T: Real>(&self, model: &ErrorModel<T>) -> T {
        let mut terms: Vec<(T, usize, u64)> = self
            .buckets()
            .map(|((x, y, z), c)| (model.probability_of_counts(self.n, x, y, z), self.index(x, y, z), c))
            .collect();
        terms.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
        terms
            .into_iter()
            .map(|(p, _, c)| p * T::of_count(c))
            .collect::<CompensatedSum<T>>()
            .value()
    }
}

pub(crate) fn pack_rows(m: &F2Matrix) -> Result<Vec<PackedPauli>> {
    if m.ncols() / 2 > 64 {
        return Err(invalid_arg("packed enumeration supports at most 64 qubits"));
    }
    Ok(m.rows_iter().map(|r| PackedPauli::from_row(&r)).collect())
}

/// Histogram of every element of `<S, L> \ <S>`: all combinations of the
/// rows of `s` and `l` whose `l` part is nonzero. Cost is `2^(rows)`.
pub fn enumerate_nontrivial(s: &F2Matrix, l: &F2Matrix) -> Result<TypeHistogram> {
    if s.ncols() != l.ncols() || s.ncols() % 2 != 0 {
        return Err(invalid_arg("S and L need equal, even column counts"));
    }
    let n = s.ncols() / 2;
    let rows_s = s.nrows();
    let total_rows = rows_s + l.nrows();
    if total_rows >= 63 {
        return Err(Error::ResourceLimit(format!("cannot enumerate 2^{total_rows} combinations")));
    }
    let mut rows = pack_rows(s)?;
    rows.extend(pack_rows(l)?);

    let mut hist = TypeHistogram::new(n);
    let mut acc = PackedPauli::default();
    // Gray-code walk: step i flips coefficient trailing_zeros(i).
    for i in 1u64..(1u64 << total_rows) {
        acc = acc.xor(rows[i.trailing_zeros() as usize]);
        let gray = i ^ (i >> 1);
        if gray >> rows_s != 0 {
            hist.add_packed(acc);
        }
    }
    Ok(hist)
}

/// Histogram of the non-trivial logical operators of `code`.
pub fn logical_histogram(code: &StabiliserCode) -> Result<TypeHistogram> {
    enumerate_nontrivial(&code.s, &code.l)
}

/// Minimum weight of a non-trivial logical operator, by full enumeration.
pub fn distance_exact(code: &StabiliserCode) -> Result<usize> {
    let (n, k) = (code.n(), code.k());
    if n + k > DISTANCE_ENUMERATION_CAP {
        return Err(Error::ResourceLimit(format!(
            "n + k = {} exceeds the enumeration cap of {DISTANCE_ENUMERATION_CAP}; use qdistevol for an upper bound",
            n + k
        )));
    }
    let hist = logical_histogram(code)?;
    Ok(hist.min_weight().expect("k >= 1 gives non-trivial logicals"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitVec;
    use crate::genome::code::{build_code, CanonicalCode};
    use crate::genome::genotype::CodeGenotype;
    use crate::genome::shape::CodeShape;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn five_qubit() -> StabiliserCode {
        let shape = CodeShape::stabiliser(5, 1).unwrap();
        build_code(
            &CanonicalCode::new(
                shape,
                F2Matrix::parse_text("1\n0\n0\n1").unwrap(),
                F2Matrix::parse_text("1\n1\n1\n1").unwrap(),
                F2Matrix::parse_text("0010\n0011\n1100\n0100").unwrap(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn five_qubit_distance_and_count() {
        let code = five_qubit();
        let hist = logical_histogram(&code).unwrap();
        assert_eq!(hist.total(), 48);
        assert_eq!(distance_exact(&code).unwrap(), 3);
        // weight enumerator of the non-trivial logicals of [[5,1,3]]
        assert_eq!(hist.weight_distribution(), vec![0, 0, 0, 30, 0, 18]);
    }

    #[test]
    fn weight_one_logical() {
        let shape = CodeShape::stabiliser(2, 1).unwrap();
        let code = build_code(&CanonicalCode::zeros(shape));
        assert_eq!(distance_exact(&code).unwrap(), 1);
    }

    // Direct enumeration over coefficient vectors, no Gray code or packing.
    fn brute_force(code: &StabiliserCode) -> (u64, usize) {
        let stack = code.s.vstack(&code.l).unwrap();
        let rows = stack.nrows();
        let ns = code.s.nrows();
        let (mut count, mut min) = (0, usize::MAX);
        for u in 0u64..(1 << rows) {
            if u >> ns == 0 {
                continue;
            }
            let coeffs = BitVec::from_bools(&(0..rows).map(|i| u >> i & 1 == 1).collect::<Vec<_>>());
            let v = stack.left_mul_vec(&coeffs);
            count += 1;
            min = min.min(crate::pauli::row_weight(&v));
        }
        (count, min)
    }

    #[test]
    fn counts_match_closed_form_and_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..60 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(1..n);
            if n + k > 14 {
                continue;
            }
            let r = rng.gen_range(0..=n - k);
            let shape = CodeShape::new(n, k, r).unwrap().with_m_diagonal(true);
            let code = CodeGenotype::random(shape, &mut rng).to_code();
            let hist = logical_histogram(&code).unwrap();
            let expected = (1u64 << (n - k)) * (4u64.pow(k as u32) - 1);
            assert_eq!(hist.total(), expected);
            let (count, min) = brute_force(&code);
            assert_eq!(hist.total(), count);
            assert_eq!(hist.min_weight().unwrap(), min);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let shape = CodeShape::stabiliser(20, 7).unwrap();
        let code = build_code(&CanonicalCode::zeros(shape));
        assert!(matches!(distance_exact(&code), Err(Error::ResourceLimit(_))));
    }
}
