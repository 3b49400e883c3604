//! Encoding circuits read directly off the canonical form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::f2::F2Matrix;

use super::code::CanonicalCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gate {
    Cx { control: usize, target: usize },
    S(usize),
    Cz(usize, usize),
    H(usize),
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Cx { control, target } => write!(f, "CX {control} {target}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::H(q) => write!(f, "H {q}"),
        }
    }
}

/// Gates in application order, followed by a qubit permutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodingCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub permutation: Vec<usize>,
}

impl EncodingCircuit {
    /// Symplectic matrix of the circuit: row `i` is the image of `X_i`, row
    /// `n + i` the image of `Z_i`, under conjugation by the whole circuit.
    pub fn symplectic_matrix(&self) -> F2Matrix {
        let n = self.n;
        let mut tau = F2Matrix::identity(2 * n);
        for row in 0..2 * n {
            for gate in &self.gates {
                conjugate(&mut tau, row, n, *gate);
            }
        }
        tau.permute_qubits(&inverse(&self.permutation))
            .expect("circuit permutation is valid")
    }
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Conjugates the Pauli in `row` of `m` (ignoring phase) by `gate`.
fn conjugate(m: &mut F2Matrix, row: usize, n: usize, gate: Gate) {
    let x = |m: &F2Matrix, q: usize| m.get(row, q);
    let z = |m: &F2Matrix, q: usize| m.get(row, n + q);
    match gate {
        Gate::H(q) => {
            let (xq, zq) = (x(m, q), z(m, q));
            m.set(row, q, zq);
            m.set(row, n + q, xq);
        }
        Gate::S(q) => {
            if x(m, q) {
                m.flip(row, n + q);
            }
        }
        Gate::Cz(a, b) => {
            let (xa, xb) = (x(m, a), x(m, b));
            if xb {
                m.flip(row, n + a);
            }
            if xa {
                m.flip(row, n + b);
            }
        }
        Gate::Cx { control, target } => {
            if x(m, control) {
                m.flip(row, target);
            }
            if z(m, target) {
                m.flip(row, n + control);
            }
        }
    }
}

/// The binary symplectic form `Omega = (0 I; I 0)`.
pub fn omega(n: usize) -> F2Matrix {
    F2Matrix::from_fn(2 * n, 2 * n, |r, c| c == (r + n) % (2 * n))
}

/// True iff `tau * Omega * tau^T == Omega`.
pub fn is_symplectic(tau: &F2Matrix) -> bool {
    if tau.nrows() != tau.ncols() || tau.nrows() % 2 != 0 {
        return false;
    }
    let n = tau.nrows() / 2;
    tau.symplectic_gram(tau).map(|g| g == omega(n)).unwrap_or(false)
}

/// CX gates from `C`, then S and CZ gates from `Q = (M A; A^T 0)`, then
/// Hadamards on qubits `r..n`. The permutation is the identity.
pub fn encoding_circuit(c: &CanonicalCode) -> EncodingCircuit {
    let n = c.shape.n;
    let k = c.shape.k;
    let r = c.shape.r;
    let mut gates = Vec::new();
    for i in 0..n - k {
        for j in 0..k {
            if c.c.get(i, j) {
                gates.push(Gate::Cx {
                    control: i,
                    target: n - k + j,
                });
            }
        }
    }
    let q = c.q();
    for i in 0..n {
        if q.get(i, i) {
            gates.push(Gate::S(i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if q.get(i, j) {
                gates.push(Gate::Cz(i, j));
            }
        }
    }
    gates.extend((r..n).map(Gate::H));
    EncodingCircuit {
        n,
        gates,
        permutation: (0..n).collect(),
    }
}
