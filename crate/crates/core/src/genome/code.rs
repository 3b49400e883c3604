//! Canonical `(C, A, M)` data and the stabiliser codes built from it.

use crate::error::{invalid_arg, Error, Result};
use crate::f2::F2Matrix;
use crate::pauli::PauliOp;

use super::shape::CodeShape;

/// Canonical form of a code with the qubit permutation fixed to identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalCode {
    pub shape: CodeShape,
    /// `(n-k) x k`, stacked `(C1; C2)`.
    pub c: F2Matrix,
    /// `r x (n-r)`, side by side `(A1 A2)`.
    pub a: F2Matrix,
    /// `r x r` symmetric.
    pub m: F2Matrix,
}

impl CanonicalCode {
    pub fn new(shape: CodeShape, c: F2Matrix, a: F2Matrix, m: F2Matrix) -> Result<Self> {
        shape.validate()?;
        let CodeShape { n, k, r, .. } = shape;
        let dims_ok = c.nrows() == n - k
            && c.ncols() == k
            && a.nrows() == r
            && a.ncols() == n - r
            && m.nrows() == r
            && m.ncols() == r;
        if !dims_ok {
            return Err(invalid_arg("canonical matrices do not match the shape"));
        }
        if m.transpose() != m {
            return Err(invalid_arg("M must be symmetric"));
        }
        if !shape.include_m_diagonal && (0..r).any(|i| m.get(i, i)) {
            return Err(invalid_arg("M has diagonal bits but the shape excludes them"));
        }
        let code = CanonicalCode { shape, c, a, m };
        if shape.css && (!code.c1().is_zero() || !code.m.is_zero()) {
            return Err(invalid_arg("CSS codes need C1 = 0 and M = 0"));
        }
        Ok(code)
    }

    pub fn zeros(shape: CodeShape) -> Self {
        let CodeShape { n, k, r, .. } = shape;
        CanonicalCode {
            shape,
            c: F2Matrix::zeros(n - k, k),
            a: F2Matrix::zeros(r, n - r),
            m: F2Matrix::zeros(r, r),
        }
    }

    pub fn a1(&self) -> F2Matrix {
        let s = self.shape.s();
        self.a.submatrix(0..self.shape.r, 0..s)
    }

    pub fn a2(&self) -> F2Matrix {
        let s = self.shape.s();
        self.a.submatrix(0..self.shape.r, s..s + self.shape.k)
    }

    pub fn c1(&self) -> F2Matrix {
        self.c.submatrix(0..self.shape.r, 0..self.shape.k)
    }

    pub fn c2(&self) -> F2Matrix {
        let r = self.shape.r;
        self.c.submatrix(r..r + self.shape.s(), 0..self.shape.k)
    }

    /// `B = M + C1 A2^T`.
    pub fn b(&self) -> F2Matrix {
        let c1a2 = self.c1().mul(&self.a2().transpose()).expect("block dims");
        self.m.add(&c1a2).expect("block dims")
    }

    /// `D = A1^T + C2 A2^T`.
    pub fn d(&self) -> F2Matrix {
        let c2a2 = self.c2().mul(&self.a2().transpose()).expect("block dims");
        self.a1().transpose().add(&c2a2).expect("block dims")
    }

    /// `Q = (M A; A^T 0)`, the CZ/S pattern of the encoding circuit.
    pub fn q(&self) -> F2Matrix {
        let n = self.shape.n;
        let r = self.shape.r;
        let mut q = F2Matrix::zeros(n, n);
        q.set_block(0, 0, &self.m);
        q.set_block(0, r, &self.a);
        q.set_block(r, 0, &self.a.transpose());
        q
    }
}

/// Check matrix, logical operators and destabilisers of a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabiliserCode {
    pub shape: CodeShape,
    /// `(n-k) x 2n` check matrix.
    pub s: F2Matrix,
    /// `2k x 2n`, logical Z rows followed by logical X rows.
    pub l: F2Matrix,
    /// `(n-k) x 2n` destabilisers; row `i` anticommutes only with `s` row `i`.
    pub r: F2Matrix,
}

impl StabiliserCode {
    /// Assembles a code from its parts and checks every invariant.
    pub fn from_parts(shape: CodeShape, s: F2Matrix, l: F2Matrix, r: F2Matrix) -> Result<Self> {
        let code = StabiliserCode { shape, s, l, r };
        code.check_invariants()?;
        Ok(code)
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn k(&self) -> usize {
        self.shape.k
    }

    pub fn l_z(&self) -> F2Matrix {
        self.l.submatrix(0..self.k(), 0..2 * self.n())
    }

    pub fn l_x(&self) -> F2Matrix {
        self.l.submatrix(self.k()..2 * self.k(), 0..2 * self.n())
    }

    pub fn stabilisers(&self) -> Vec<PauliOp> {
        to_paulis(&self.s)
    }

    pub fn logicals(&self) -> Vec<PauliOp> {
        to_paulis(&self.l)
    }

    /// Verifies commutation, rank and pairing relations among `S`, `L`, `R`.
    pub fn check_invariants(&self) -> Result<()> {
        let (n, k) = (self.n(), self.k());
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.s.nrows() != n - k || self.s.ncols() != 2 * n {
            return bad(format!("S is {}x{}, expected {}x{}", self.s.nrows(), self.s.ncols(), n - k, 2 * n));
        }
        if self.l.nrows() != 2 * k || self.l.ncols() != 2 * n {
            return bad(format!("L is {}x{}, expected {}x{}", self.l.nrows(), self.l.ncols(), 2 * k, 2 * n));
        }
        if self.r.nrows() != n - k || self.r.ncols() != 2 * n {
            return bad(format!("R is {}x{}, expected {}x{}", self.r.nrows(), self.r.ncols(), n - k, 2 * n));
        }
        let gram_ss = self.s.symplectic_gram(&self.s)?;
        if let Some((i, j)) = first_set(&gram_ss) {
            return Err(Error::NonCommuting { first: i, second: j });
        }
        if self.s.rank() != n - k {
            return bad(format!("S has rank {}, expected {}", self.s.rank(), n - k));
        }
        if let Some((i, j)) = first_set(&self.l.symplectic_gram(&self.s)?) {
            return bad(format!("logical row {i} anticommutes with stabiliser {j}"));
        }
        let mut pairing = F2Matrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            pairing.set(i, k + i, true);
            pairing.set(k + i, i, true);
        }
        if self.l.symplectic_gram(&self.l)? != pairing {
            return bad("logical Z/X rows are not paired".into());
        }
        if self.s.vstack(&self.l)?.rank() != n + k {
            return bad("logical rows are not independent of the stabilisers".into());
        }
        if self.r.symplectic_gram(&self.s)? != F2Matrix::identity(n - k) {
            return bad("destabiliser rows are not paired with stabilisers".into());
        }
        if !self.r.symplectic_gram(&self.l)?.is_zero() || !self.r.symplectic_gram(&self.r)?.is_zero() {
            return bad("destabilisers do not commute with logicals and each other".into());
        }
        Ok(())
    }
}

fn first_set(m: &F2Matrix) -> Option<(usize, usize)> {
    (0..m.nrows()).find_map(|i| (0..m.ncols()).find(|&j| m.get(i, j)).map(|j| (i, j)))
}

pub(crate) fn to_paulis(m: &F2Matrix) -> Vec<PauliOp> {
    m.rows_iter()
        .map(|row| PauliOp::from_vector(&row).expect("even column count"))
        .collect()
}

/// Builds `S`, `L` and `R` from canonical data. Every valid canonical form
/// yields a code satisfying all invariants.
pub fn build_code(c: &CanonicalCode) -> StabiliserCode {
    let CodeShape { n, k, r, .. } = c.shape;
    let s = c.shape.s();
    let (a1, a2, c1, c2) = (c.a1(), c.a2(), c.c1(), c.c2());

    let mut checks = F2Matrix::zeros(n - k, 2 * n);
    checks.set_block(0, 0, &F2Matrix::identity(r));
    checks.set_block(0, r, &a1);
    checks.set_block(0, r + s, &a2);
    checks.set_block(0, n, &c.b());
    checks.set_block(0, n + r + s, &c1);
    checks.set_block(r, n, &c.d());
    checks.set_block(r, n + r, &F2Matrix::identity(s));
    checks.set_block(r, n + r + s, &c2);

    let mut logicals = F2Matrix::zeros(2 * k, 2 * n);
    logicals.set_block(0, n, &a2.transpose());
    logicals.set_block(0, n + r + s, &F2Matrix::identity(k));
    logicals.set_block(k, r, &c2.transpose());
    logicals.set_block(k, r + s, &F2Matrix::identity(k));
    logicals.set_block(k, n, &c1.transpose());

    let mut destab = F2Matrix::zeros(n - k, 2 * n);
    destab.set_block(0, n, &F2Matrix::identity(r));
    destab.set_block(r, r, &F2Matrix::identity(s));

    StabiliserCode {
        shape: c.shape,
        s: checks,
        l: logicals,
        r: destab,
    }
}
