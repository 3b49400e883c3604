//! Plain-text code interchange.
//!
//! ```text
//! n k r s css
//! <n-k rows of S>
//! <2k rows of L: logical Z rows, then logical X rows>
//! <n-k rows of R>
//! ```
//!
//! Rows are '0'/'1' strings with a '|' between the X and Z halves. Blank
//! lines and lines starting with '#' are ignored. A file holding only the
//! `n-k` rows of S is completed through the standard form.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::f2::{BitVec, F2Matrix};
use crate::genome::{build_code, standard_form, CodeShape, StabiliserCode};

/// Parsed contents of a code file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeFile {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub s: usize,
    pub css: bool,
    pub stabilisers: F2Matrix,
    pub logicals: F2Matrix,
    pub destabilisers: F2Matrix,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl CodeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| parse_err("empty code file"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(format!("header {header:?} is not 'n k r s css'")));
        }
        let num = |i: usize| -> Result<usize> {
            fields[i]
                .parse()
                .map_err(|e| parse_err(format!("bad header field {:?}: {e}", fields[i])))
        };
        let (n, k, r, s) = (num(0)?, num(1)?, num(2)?, num(3)?);
        let css = match fields[4] {
            "1" | "true" => true,
            "0" | "false" => false,
            other => return Err(parse_err(format!("bad css flag {other:?}"))),
        };
        if n == 0 || k == 0 || k > n || r + s + k != n {
            return Err(parse_err(format!("inconsistent header n={n} k={k} r={r} s={s}")));
        }
        let rows: Vec<BitVec> = lines.map(BitVec::parse).collect::<Result<_>>()?;
        if let Some(bad) = rows.iter().find(|row| row.len() != 2 * n) {
            return Err(parse_err(format!("row of {} bits, expected {}", bad.len(), 2 * n)));
        }
        let nk = n - k;
        let block = |range: std::ops::Range<usize>| F2Matrix::from_rows(2 * n, &rows[range]);
        if rows.len() == nk && k < n {
            let code = complete_from_stabilisers(&block(0..nk))?;
            return Ok(CodeFile {
                n,
                k,
                r,
                s,
                css,
                stabilisers: code.s,
                logicals: code.l,
                destabilisers: code.r,
            });
        }
        if rows.len() != 2 * nk + 2 * k {
            return Err(parse_err(format!(
                "expected {} rows (S, L, R) or {nk} rows (S), found {}",
                2 * nk + 2 * k,
                rows.len()
            )));
        }
        Ok(CodeFile {
            n,
            k,
            r,
            s,
            css,
            stabilisers: block(0..nk),
            logicals: block(nk..nk + 2 * k),
            destabilisers: block(nk + 2 * k..rows.len()),
        })
    }

    pub fn from_code(code: &StabiliserCode) -> Self {
        CodeFile {
            n: code.n(),
            k: code.k(),
            r: code.shape.r,
            s: code.shape.s(),
            css: code.shape.css,
            stabilisers: code.s.clone(),
            logicals: code.l.clone(),
            destabilisers: code.r.clone(),
        }
    }

    /// A checked [`StabiliserCode`]; fails for the degenerate `k = n` case.
    pub fn to_code(&self) -> Result<StabiliserCode> {
        let mut shape = CodeShape::new(self.n, self.k, self.r)?;
        shape.css = self.css;
        StabiliserCode::from_parts(
            shape,
            self.stabilisers.clone(),
            self.logicals.clone(),
            self.destabilisers.clone(),
        )
        .map_err(|e| Error::InvalidInput(format!("code file fails validation: {e}")))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {} {} {} {}", self.n, self.k, self.r, self.s, u8::from(self.css)).unwrap();
        out.push_str(&self.stabilisers.to_pauli_text());
        out.push_str(&self.logicals.to_pauli_text());
        out.push_str(&self.destabilisers.to_pauli_text());
        out
    }
}

/// Logicals and destabilisers for a bare check matrix, in its qubit order.
fn complete_from_stabilisers(s: &F2Matrix) -> Result<StabiliserCode> {
    let sf = standard_form(s)?;
    let code = build_code(&sf.canonical);
    let restore = |m: &F2Matrix| sf.restore_order(m);
    Ok(StabiliserCode {
        shape: code.shape,
        s: restore(&code.s)?,
        l: restore(&code.l)?,
        r: restore(&code.r)?,
    })
}

pub fn write_code(code: &StabiliserCode) -> String {
    CodeFile::from_code(code).to_text()
}

pub fn read_code(text: &str) -> Result<StabiliserCode> {
    CodeFile::parse(text)?.to_code()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{CodeGenotype, CodeShape};
    use crate::pauli::PauliOp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let n = rng.gen_range(2..9);
            let k = rng.gen_range(1..n);
            let shape = CodeShape::stabiliser(n, k).unwrap().with_m_diagonal(true);
            let code = CodeGenotype::random(shape, &mut rng).to_code();
            let text = write_code(&code);
            let back = read_code(&text).unwrap();
            assert_eq!(back.s, code.s);
            assert_eq!(back.l, code.l);
            assert_eq!(back.r, code.r);
        }
    }

    #[test]
    fn five_qubit_text() {
        let code = CodeGenotype::zeros(CodeShape::stabiliser(5, 1).unwrap()).to_code();
        let text = write_code(&code);
        assert!(text.starts_with("5 1 4 0 0\n"));
        assert_eq!(text.lines().count(), 1 + 4 + 2 + 4);
    }

    #[test]
    fn stabilisers_only_are_completed() {
        let rows: Vec<String> = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
            .iter()
            .map(|s| {
                let v = s.parse::<PauliOp>().unwrap().to_vector();
                let t = v.to_string();
                format!("{}|{}", &t[..5], &t[5..])
            })
            .collect();
        let text = format!("5 1 4 0 0\n{}\n", rows.join("\n"));
        let file = CodeFile::parse(&text).unwrap();
        let code = file.to_code().unwrap();
        assert_eq!(code.s.rank(), 4);
        assert!(code.l.symplectic_gram(&code.s).unwrap().is_zero());
    }

    #[test]
    fn degenerate_single_qubit() {
        let file = CodeFile::parse("1 1 0 0 0\n0|1\n1|0\n").unwrap();
        assert_eq!(file.stabilisers.nrows(), 0);
        assert_eq!(file.logicals.nrows(), 2);
        assert!(file.to_code().is_err());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "5 1 4 0\n", "5 1 4 0 x\n", "5 1 3 0 0\n", "2 1 1 0 0\n10|01\n1|0\n"] {
            assert!(matches!(CodeFile::parse(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }
}
