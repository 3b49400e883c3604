use std::fmt::Write as _;
use std::io::Write;

use clap::Args;
use stabevo::f2::F2Matrix;
use stabevo::genome::{build_code, encode, enumerate_nontrivial, standard_form, CanonicalCode, CodeShape};
use stabevo::PauliOp;

use crate::{CliError, CliResult, EXIT_OK};

#[derive(Args, Debug, Clone)]
pub struct ExampleArgs {
    /// Example to print; only `five-qubit` is available.
    #[arg(long, default_value = "five-qubit")]
    pub name: String,
}

const FIVE_QUBIT: [&str; 5] = ["IXZZX", "XIXZZ", "ZXIXZ", "ZZXIX", "XZZXI"];

fn split_row(m: &F2Matrix, row: usize) -> (String, String) {
    let n = m.ncols() / 2;
    let bits = |range: std::ops::Range<usize>| -> String {
        range.map(|c| if m.get(row, c) { '1' } else { '0' }).collect()
    };
    (bits(0..n), bits(n..2 * n))
}

fn matrix_block(out: &mut String, name: &str, m: &F2Matrix) {
    writeln!(out, "{name} =").unwrap();
    for line in m.to_string().lines() {
        writeln!(out, "  {line}").unwrap();
    }
}

fn pauli_rows(out: &mut String, name: &str, m: &F2Matrix) {
    writeln!(out, "{name} =").unwrap();
    for i in 0..m.nrows() {
        let (x, z) = split_row(m, i);
        writeln!(out, "  {x}|{z}").unwrap();
    }
}

/// The five-qubit code taken from its cyclic generators through standard
/// form, canonical form, logical operators, distance and genotype.
pub fn five_qubit_walkthrough() -> String {
    let mut out = String::new();
    let ops: Vec<PauliOp> = FIVE_QUBIT.iter().map(|s| s.parse().expect("valid Pauli")).collect();

    writeln!(out, "# five-qubit code").unwrap();
    writeln!(out).unwrap();
    writeln!(out, "stabiliser  x      z").unwrap();
    for (j, op) in ops.iter().enumerate() {
        writeln!(out, "S{j}={op}    {}  {}", op.x(), op.z()).unwrap();
    }
    writeln!(out, "(S4 = S0 S1 S2 S3)").unwrap();
    writeln!(out).unwrap();

    let rows: Vec<_> = ops.iter().map(PauliOp::to_vector).collect();
    let raw = F2Matrix::from_rows(10, &rows);
    let sf = standard_form(&raw).expect("the five-qubit generators commute");
    let canon = &sf.canonical;
    let code = build_code(canon);
    let CodeShape { n, k, r, .. } = canon.shape;
    writeln!(
        out,
        "n={n} k={k} r={r} s={} permutation={}",
        canon.shape.s(),
        if sf.is_identity_permutation() { "identity" } else { "non-trivial" }
    )
    .unwrap();
    pauli_rows(&mut out, "S", &code.s);
    writeln!(out).unwrap();

    matrix_block(&mut out, "A", &canon.a);
    matrix_block(&mut out, "B", &canon.b());
    matrix_block(&mut out, "C", &canon.c);
    matrix_block(&mut out, "M", &canon.m);
    writeln!(out).unwrap();

    pauli_rows(&mut out, "L", &code.l);
    let logicals = code.logicals();
    writeln!(out, "logical Z = {}", logicals[0]).unwrap();
    writeln!(out, "logical X = {}", logicals[1]).unwrap();
    let hist = enumerate_nontrivial(&code.s, &code.l).expect("small code");
    writeln!(out, "nontrivial logicals = {}", hist.total()).unwrap();
    writeln!(out, "distance = {}", hist.min_weight().unwrap_or(0)).unwrap();
    writeln!(out, "parameters = [[{n},{k},{}]]", hist.min_weight().unwrap_or(0)).unwrap();
    writeln!(out).unwrap();

    let full = encode(&with_diagonal(canon, true)).expect("canonical form encodes");
    let short = encode(&with_diagonal(canon, false)).expect("canonical form encodes");
    writeln!(out, "genotype ({} bits) = {}", full.len(), full.sections()).unwrap();
    writeln!(out, "genotype ({} bits) = {}", short.len(), short.sections()).unwrap();
    out
}

fn with_diagonal(c: &CanonicalCode, include: bool) -> CanonicalCode {
    let mut c = c.clone();
    c.shape = c.shape.with_m_diagonal(include);
    c
}

pub fn run(args: ExampleArgs, out: &mut (dyn Write + Send)) -> CliResult<i32> {
    let text = match args.name.as_str() {
        "five-qubit" => five_qubit_walkthrough(),
        other => return Err(CliError::Usage(format!("unknown example {other:?}; available: five-qubit"))),
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Data(e.to_string()))?;
    Ok(EXIT_OK)
}
