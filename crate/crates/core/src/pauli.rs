//! Unsigned Pauli operators and i.i.d. Pauli error models.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::f2::BitVec;
use crate::scalar::Real;

/// An n-qubit Pauli operator `X(x) Z(z)` with phase ignored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    x: BitVec,
    z: BitVec,
}

impl PauliOp {
    pub fn new(x: BitVec, z: BitVec) -> Result<Self> {
        if x.len() != z.len() {
            return Err(invalid_arg("x and z components differ in length"));
        }
        Ok(PauliOp { x, z })
    }

    pub fn identity(n: usize) -> Self {
        PauliOp {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    /// Splits a length-2n vector `(x | z)`.
    pub fn from_vector(v: &BitVec) -> Result<Self> {
        if v.len() % 2 != 0 {
            return Err(invalid_arg("symplectic vector must have even length"));
        }
        let n = v.len() / 2;
        Ok(PauliOp {
            x: v.slice(0, n),
            z: v.slice(n, 2 * n),
        })
    }

    pub fn to_vector(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    /// Number of qubits acted on by a non-identity factor.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Counts of X, Y and Z factors.
    pub fn type_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for (a, b) in self.x.words().iter().zip(self.z.words()) {
            counts.0 += (a & !b).count_ones() as usize;
            counts.1 += (a & b).count_ones() as usize;
            counts.2 += (!a & b).count_ones() as usize;
        }
        counts
    }

    /// `z_a . x_b + x_a . z_b (mod 2)`; true iff the operators anticommute.
    pub fn symplectic_product(&self, other: &PauliOp) -> Result<bool> {
        if self.n() != other.n() {
            return Err(invalid_arg(format!(
                "symplectic product of operators on {} and {} qubits",
                self.n(),
                other.n()
            )));
        }
        Ok(self.z.dot(&other.x) ^ self.x.dot(&other.z))
    }

    pub fn commutes_with(&self, other: &PauliOp) -> Result<bool> {
        Ok(!self.symplectic_product(other)?)
    }

    pub fn mul(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n() != other.n() {
            return Err(invalid_arg("product of operators on different qubit counts"));
        }
        let mut out = self.clone();
        out.x.xor_assign(&other.x);
        out.z.xor_assign(&other.z);
        Ok(out)
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    /// Parses a string over `IXYZ`, one character per qubit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        let mut op = PauliOp::identity(n);
        for (i, c) in s.chars().enumerate() {
            let (x, z) = match c {
                'I' | '_' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                c => return Err(Error::Parse(format!("unexpected Pauli letter {c:?}"))),
            };
            op.x.set(i, x);
            op.z.set(i, z);
        }
        Ok(op)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            let c = match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

/// Single-qubit Pauli channel applied independently to every qubit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel<T> {
    pub p_i: T,
    pub p_x: T,
    pub p_y: T,
    pub p_z: T,
}

const NORMALISATION_TOL: f64 = 1e-12;

impl<T: Real> ErrorModel<T> {
    /// Model with the given error probabilities; `p_i` is inferred.
    pub fn new(p_x: T, p_y: T, p_z: T) -> Result<Self> {
        Self::from_components(T::one() - p_x - p_y - p_z, p_x, p_y, p_z)
    }

    pub fn from_components(p_i: T, p_x: T, p_y: T, p_z: T) -> Result<Self> {
        let tol = T::of(NORMALISATION_TOL);
        for (name, p) in [("p_i", p_i), ("p_x", p_x), ("p_y", p_y), ("p_z", p_z)] {
            if !(p >= -tol && p <= T::one() + tol) {
                return Err(invalid_arg(format!("{name} = {p} is not a probability")));
            }
        }
        let total = p_i + p_x + p_y + p_z;
        if (total - T::one()).abs() > tol.max(T::epsilon() * T::of(4.0)) {
            return Err(invalid_arg(format!("probabilities sum to {total}, not 1")));
        }
        let clamp = |p: T| p.max(T::zero());
        Ok(ErrorModel {
            p_i: clamp(p_i),
            p_x: clamp(p_x),
            p_y: clamp(p_y),
            p_z: clamp(p_z),
        })
    }

    /// Depolarising channel `(1-3p, p, p, p)`.
    pub fn depolarising(p: T) -> Result<Self> {
        let three = T::of(3.0);
        if !(p >= T::zero()) || p * three > T::one() + T::of(NORMALISATION_TOL) {
            return Err(invalid_arg(format!("depolarising rate {p} outside [0, 1/3]")));
        }
        let p_i = (T::one() - three * p).max(T::zero());
        Ok(ErrorModel {
            p_i,
            p_x: p,
            p_y: p,
            p_z: p,
        })
    }

    pub fn is_depolarising(&self) -> bool {
        self.p_x == self.p_y && self.p_y == self.p_z
    }

    fn log_term(p: T, count: usize) -> T {
        if count == 0 {
            T::zero()
        } else if p == T::zero() {
            T::neg_infinity()
        } else {
            T::of_count(count as u64) * p.ln()
        }
    }

    /// Probability of an operator on `n` qubits with the given numbers of
    /// X, Y and Z factors.
    pub fn probability_of_counts(&self, n: usize, nx: usize, ny: usize, nz: usize) -> T {
        let ni = n - nx - ny - nz;
        // Equal rates are merged so that operators with the same weight get
        // bit-identical probabilities.
        let mut groups: [(T, usize); 3] = [(self.p_x, nx), (self.p_y, ny), (self.p_z, nz)];
        for i in 1..3 {
            for j in 0..i {
                if groups[j].1 > 0 && groups[j].0 == groups[i].0 {
                    groups[j].1 += groups[i].1;
                    groups[i].1 = 0;
                    break;
                }
            }
        }
        let log = groups
            .iter()
            .fold(Self::log_term(self.p_i, ni), |acc, &(p, c)| acc + Self::log_term(p, c));
        log.exp()
    }

    pub fn op_probability(&self, op: &PauliOp) -> T {
        let (nx, ny, nz) = op.type_counts();
        self.probability_of_counts(op.n(), nx, ny, nz)
    }

    /// Probability of the operator held in a length-2n symplectic row.
    pub fn row_probability(&self, row: &BitVec) -> T {
        let (n, nx, ny, nz) = row_type_counts(row);
        self.probability_of_counts(n, nx, ny, nz)
    }

    pub fn cast<U: Real>(&self) -> ErrorModel<U> {
        let c = |v: T| U::of(v.to_f64().unwrap_or(f64::NAN));
        ErrorModel {
            p_i: c(self.p_i),
            p_x: c(self.p_x),
            p_y: c(self.p_y),
            p_z: c(self.p_z),
        }
    }
}

/// `(n, nx, ny, nz)` for a length-2n row `(x | z)`.
pub fn row_type_counts(row: &BitVec) -> (usize, usize, usize, usize) {
    let n = row.len() / 2;
    let (mut nx, mut ny, mut nz) = (0, 0, 0);
    for i in 0..n {
        match (row.get(i), row.get(n + i)) {
            (true, false) => nx += 1,
            (true, true) => ny += 1,
            (false, true) => nz += 1,
            (false, false) => {}
        }
    }
    (n, nx, ny, nz)
}

/// Weight of the operator held in a length-2n symplectic row.
pub fn row_weight(row: &BitVec) -> usize {
    let (_, nx, ny, nz) = row_type_counts(row);
    nx + ny + nz
}

impl<T: Real> FromStr for ErrorModel<T> {
    type Err = Error;

    /// `depolarising:<p>` or `pauli:<p_x>,<p_y>,<p_z>`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |v: &str| -> Result<T> {
            v.trim()
                .parse::<f64>()
                .map(T::of)
                .map_err(|e| Error::Parse(format!("bad probability {v:?}: {e}")))
        };
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("error model {s:?} lacks a ':'")))?;
        match kind.trim() {
            "depolarising" | "depolarizing" => Self::depolarising(parse(args)?),
            "pauli" => {
                let parts: Vec<&str> = args.split(',').collect();
                if parts.len() != 3 {
                    return Err(Error::Parse("pauli model needs p_x,p_y,p_z".into()));
                }
                Self::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
            }
            other => Err(Error::Parse(format!("unknown error model {other:?}"))),
        }
    }
}

impl<T: Real> fmt::Display for ErrorModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_depolarising() {
            write!(f, "depolarising:{}", self.p_x)
        } else {
            write!(f, "pauli:{},{},{}", self.p_x, self.p_y, self.p_z)
        }
    }
}

/// Packed operator for hot loops on at most 64 qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct PackedPauli {
    pub x: u64,
    pub z: u64,
}

impl PackedPauli {
    pub fn from_row(row: &BitVec) -> Self {
        let n = row.len() / 2;
        debug_assert!(n <= 64);
        let mut p = PackedPauli::default();
        for i in row.iter_ones() {
            if i < n {
                p.x |= 1 << i;
            } else {
                p.z |= 1 << (i - n);
            }
        }
        p
    }

    pub fn to_row(self, n: usize) -> BitVec {
        let mut row = BitVec::zeros(2 * n);
        for i in 0..n {
            row.set(i, self.x >> i & 1 == 1);
            row.set(n + i, self.z >> i & 1 == 1);
        }
        row
    }

    #[inline]
    pub fn weight(self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    #[inline]
    pub fn xor(self, o: PackedPauli) -> PackedPauli {
        PackedPauli {
            x: self.x ^ o.x,
            z: self.z ^ o.z,
        }
    }

    #[inline]
    pub fn counts(self) -> (usize, usize, usize) {
        (
            (self.x & !self.z).count_ones() as usize,
            (self.x & self.z).count_ones() as usize,
            (!self.x & self.z).count_ones() as usize,
        )
    }
}
