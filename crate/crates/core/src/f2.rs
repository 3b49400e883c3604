//! Bit-packed linear algebra over GF(2).
//!
//! [`F2Matrix`] stores rows as packed `u64` words; row additions are word-wise
//! XORs. Bits beyond `cols` in the last word of a row are always zero, so word
//! comparisons and popcounts never need masking.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{invalid_arg, Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Lexicographic comparison of packed bit strings, bit 0 most significant.
fn cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x.reverse_bits().cmp(&y.reverse_bits());
        }
    }
    Ordering::Equal
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: &[u64]) -> Self {
        let mut v = BitVec {
            len,
            words: words[..words_for(len)].to_vec(),
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True if any bit in `start..end` is set.
    pub fn any_in(&self, start: usize, end: usize) -> bool {
        (start..end).any(|i| self.get(i))
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub(crate) fn xor_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn hamming_distance(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in hamming distance");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Bits `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut out = BitVec::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Parses a string of '0'/'1' characters; whitespace, '|' and ',' are ignored.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::new();
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '|' | ',' => {}
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {c:?} in bit string"))),
            }
        }
        Ok(BitVec::from_bools(&bits))
    }
}

impl Hash for BitVec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.words.hash(state);
    }
}

impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_words(&self.words, &other.words).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`F2Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    pub reduced: F2Matrix,
    pub rank: usize,
    /// Pivot columns in the order they were found.
    pub pivot_cols: Vec<usize>,
    /// Row operations applied: `transform * input == reduced`.
    pub transform: F2Matrix,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        F2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = F2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from row vectors of equal length `cols`.
    pub fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut m = F2Matrix::zeros(0, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r))
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn push_row(&mut self, v: &BitVec) {
        assert_eq!(v.len(), self.cols, "row length mismatch");
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    pub(crate) fn push_row_words(&mut self, words: &[u64]) {
        debug_assert_eq!(words.len(), self.stride);
        self.data.extend_from_slice(words);
        self.rows += 1;
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        assert_ne!(dst, src, "xor of a row into itself");
        let s = self.stride;
        if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            for (a, b) in lo[dst * s..(dst + 1) * s].iter_mut().zip(&hi[..s]) {
                *a ^= b;
            }
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            for (a, b) in hi[..s].iter_mut().zip(&lo[src * s..(src + 1) * s]) {
                *a ^= b;
            }
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (x, y) = (self.get(r, a), self.get(r, b));
            self.set(r, a, y);
            self.set(r, b, x);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(invalid_arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k);
                    let dst = &mut out.data[r * out.stride..(r + 1) * out.stride];
                    for (a, b) in dst.iter_mut().zip(src) {
                        *a ^= b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(invalid_arg("cannot add matrices of different shapes"));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Vector-matrix product `v * self`.
    pub fn left_mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = BitVec::zeros(self.cols);
        for r in v.iter_ones() {
            out.xor_words(self.row_words(r));
        }
        out
    }

    pub fn vstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols {
            return Err(invalid_arg("vstack of matrices with different column counts"));
        }
        let mut out = self.clone();
        out.data.extend_from_slice(&other.data);
        out.rows += other.rows;
        Ok(out)
    }

    pub fn hstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.rows != other.rows {
            return Err(invalid_arg("hstack of matrices with different row counts"));
        }
        let mut out = F2Matrix::zeros(self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &F2Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c));
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> F2Matrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols);
        F2Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self.get(rows.start + r, cols.start + c)
        })
    }

    pub fn select_rows(&self, rows: &[usize]) -> F2Matrix {
        let mut out = F2Matrix::zeros(0, self.cols);
        for &r in rows {
            out.push_row_words(self.row_words(r));
        }
        out
    }

    /// Reduced row echelon form. Pivots are taken greedily scanning columns
    /// in `col_order` (natural order when `None`); column positions of the
    /// returned matrix are unchanged.
    pub fn rref(&self, col_order: Option<&[usize]>) -> Result<RrefResult> {
        let natural: Vec<usize>;
        let order = match col_order {
            Some(o) => {
                check_permutation(o, self.cols)?;
                o
            }
            None => {
                natural = (0..self.cols).collect();
                &natural
            }
        };
        let mut reduced = self.clone();
        let mut transform = F2Matrix::identity(self.rows);
        let mut pivot_cols = Vec::new();
        let mut pivot_row = 0;
        for &c in order {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| reduced.get(r, c)) else {
                continue;
            };
            reduced.swap_rows(pivot_row, p);
            transform.swap_rows(pivot_row, p);
            for r in 0..self.rows {
                if r != pivot_row && reduced.get(r, c) {
                    reduced.xor_row(r, pivot_row);
                    transform.xor_row(r, pivot_row);
                }
            }
            pivot_cols.push(c);
            pivot_row += 1;
        }
        Ok(RrefResult {
            reduced,
            rank: pivot_row,
            pivot_cols,
            transform,
        })
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.xor_row(r, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// True iff `v` is a GF(2) combination of the rows of `self`.
    pub fn in_span(&self, v: &BitVec) -> bool {
        RowSpace::from_matrix(self).contains(v)
    }

    /// Symplectic Gram matrix of a `2n`-column matrix: entry `(i, j)` is the
    /// symplectic product of rows `i` and `j`.
    pub fn symplectic_gram(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols % 2 != 0 || self.cols != other.cols {
            return Err(invalid_arg("symplectic products need equal, even column counts"));
        }
        let n = self.cols / 2;
        let swapped = other.swap_halves(n);
        Ok(F2Matrix::from_fn(self.rows, other.rows, |i, j| {
            self.row_words(i)
                .iter()
                .zip(swapped.row_words(j))
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                % 2
                == 1
        }))
    }

    /// Exchanges the first `n` and last `n` columns of a `2n`-column matrix.
    pub fn swap_halves(&self, n: usize) -> F2Matrix {
        assert_eq!(self.cols, 2 * n);
        F2Matrix::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, if c < n { c + n } else { c - n })
        })
    }

    /// Applies a qubit permutation to a `2n`-column matrix: column `j` of each
    /// half of the result is column `perm[j]` of the input.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<F2Matrix> {
        let n = perm.len();
        if self.cols != 2 * n {
            return Err(invalid_arg("qubit permutation length does not match matrix"));
        }
        check_permutation(perm, n)?;
        Ok(F2Matrix::from_fn(self.rows, self.cols, |r, c| {
            let (half, j) = (c / n, c % n);
            self.get(r, half * n + perm[j])
        }))
    }

    /// Parses one row per non-empty line; '|' separators are ignored.
    pub fn parse_text(s: &str) -> Result<F2Matrix> {
        let rows: Vec<BitVec> = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitVec::parse)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("rows of differing length".into()));
        }
        Ok(F2Matrix::from_rows(cols, &rows))
    }

    /// Text form with a '|' between the X and Z halves of each row.
    pub fn to_pauli_text(&self) -> String {
        let n = self.cols / 2;
        let mut out = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c == n {
                    out.push('|');
                }
                out.push(if self.get(r, c) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(invalid_arg(format!("permutation has length {}, expected {n}", perm.len())));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(invalid_arg(format!("not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Incrementally built row space supporting membership and independence
/// queries.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    basis: Vec<(usize, BitVec)>,
}

impl RowSpace {
    pub fn new(cols: usize) -> Self {
        RowSpace {
            cols,
            basis: Vec::new(),
        }
    }

    pub fn from_matrix(m: &F2Matrix) -> Self {
        let mut space = RowSpace::new(m.ncols());
        for r in 0..m.nrows() {
            space.insert(&m.row(r));
        }
        space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Reduces `v` against the basis in place.
    pub fn reduce(&self, v: &mut BitVec) {
        for (pivot, row) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the space; returns false if it was already contained.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        let first = w.iter_ones().next();
        match first {
            Some(pivot) => {
                self.basis.push((pivot, w));
                true
            }
            None => false,
        }
    }
}
