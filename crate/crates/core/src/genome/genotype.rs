//! Fixed-length bit-string genotypes and their codec.
//!
//! Non-CSS layout: `C` row-major, `A` row-major, then the upper triangle of
//! `M` row by row (diagonal entry first when the shape carries it).
//! CSS layout: `A1`, `A2`, `C2`, each row-major; `C1` and `M` are zero.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::f2::{BitVec, F2Matrix};

use super::code::{build_code, CanonicalCode, StabiliserCode};
use super::shape::CodeShape;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeGenotype {
    pub shape: CodeShape,
    pub bits: BitVec,
}

impl CodeGenotype {
    pub fn new(shape: CodeShape, bits: BitVec) -> Result<Self> {
        shape.validate()?;
        if bits.len() != shape.genotype_length() {
            return Err(invalid_arg(format!(
                "genotype has {} bits, shape needs {}",
                bits.len(),
                shape.genotype_length()
            )));
        }
        Ok(CodeGenotype { shape, bits })
    }

    pub fn zeros(shape: CodeShape) -> Self {
        CodeGenotype {
            shape,
            bits: BitVec::zeros(shape.genotype_length()),
        }
    }

    pub fn random<R: Rng + ?Sized>(shape: CodeShape, rng: &mut R) -> Self {
        let len = shape.genotype_length();
        let bools: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        CodeGenotype {
            shape,
            bits: BitVec::from_bools(&bools),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn decode(&self) -> CanonicalCode {
        decode(self)
    }

    /// Phenotype: the stabiliser code this genotype encodes.
    pub fn to_code(&self) -> StabiliserCode {
        build_code(&decode(self))
    }

    /// `<bit length>:<hex>`, bits packed most-significant first.
    pub fn to_hex(&self) -> String {
        let mut out = format!("{}:", self.bits.len());
        let nibbles = self.bits.len().div_ceil(4);
        for i in 0..nibbles {
            let mut v = 0u8;
            for j in 0..4 {
                let idx = 4 * i + j;
                v <<= 1;
                if idx < self.bits.len() && self.bits.get(idx) {
                    v |= 1;
                }
            }
            write!(out, "{v:x}").unwrap();
        }
        out
    }

    pub fn from_hex(shape: CodeShape, s: &str) -> Result<Self> {
        let (len, hex) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("genotype {s:?} lacks '<bits>:' prefix")))?;
        let len: usize = len
            .parse()
            .map_err(|e| Error::Parse(format!("bad genotype length {len:?}: {e}")))?;
        if hex.len() != len.div_ceil(4) {
            return Err(Error::Parse(format!("{} hex digits cannot hold {len} bits", hex.len())));
        }
        let mut bits = BitVec::zeros(len);
        for (i, c) in hex.chars().enumerate() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {c:?}")))?;
            for j in 0..4 {
                let idx = 4 * i + j;
                let bit = (v >> (3 - j)) & 1 == 1;
                if idx < len {
                    bits.set(idx, bit);
                } else if bit {
                    return Err(Error::Parse("nonzero padding bits in genotype hex".into()));
                }
            }
        }
        CodeGenotype::new(shape, bits)
    }

    /// Human-readable split into sections, e.g. `1001|1111|0010,011,00,0`.
    pub fn sections(&self) -> String {
        let CodeShape { n, k, r, .. } = self.shape;
        let s = self.shape.s();
        let mut pos = 0;
        let mut take = |count: usize| {
            let out = self.bits.slice(pos, pos + count).to_string();
            pos += count;
            out
        };
        if self.shape.css {
            let a1 = take(r * s);
            let a2 = take(r * k);
            let c2 = take(s * k);
            return format!("{a1}|{a2}|{c2}");
        }
        let c = take((n - k) * k);
        let a = take(r * (n - r));
        let offset = usize::from(!self.shape.include_m_diagonal);
        let m_rows: Vec<String> = (0..r)
            .map(|i| take(r - i - offset))
            .filter(|row| !row.is_empty())
            .collect();
        format!("{c}|{a}|{}", m_rows.join(","))
    }
}

fn read_block(bits: &BitVec, pos: &mut usize, rows: usize, cols: usize) -> F2Matrix {
    let m = F2Matrix::from_fn(rows, cols, |r, c| bits.get(*pos + r * cols + c));
    *pos += rows * cols;
    m
}

fn write_block(bits: &mut BitVec, pos: &mut usize, m: &F2Matrix) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            bits.set(*pos, m.get(r, c));
            *pos += 1;
        }
    }
}

/// Genotype to canonical form. Total: every bit string of the right length
/// decodes to a valid canonical form.
pub fn decode(g: &CodeGenotype) -> CanonicalCode {
    let shape = g.shape;
    let CodeShape { n, k, r, .. } = shape;
    let s = shape.s();
    let mut pos = 0;
    if shape.css {
        let a1 = read_block(&g.bits, &mut pos, r, s);
        let a2 = read_block(&g.bits, &mut pos, r, k);
        let c2 = read_block(&g.bits, &mut pos, s, k);
        let mut c = F2Matrix::zeros(n - k, k);
        c.set_block(r, 0, &c2);
        let a = a1.hstack(&a2).expect("same row count");
        return CanonicalCode {
            shape,
            c,
            a,
            m: F2Matrix::zeros(r, r),
        };
    }
    let c = read_block(&g.bits, &mut pos, n - k, k);
    let a = read_block(&g.bits, &mut pos, r, n - r);
    let mut m = F2Matrix::zeros(r, r);
    for i in 0..r {
        let start = if shape.include_m_diagonal { i } else { i + 1 };
        for j in start..r {
            if g.bits.get(pos) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
            pos += 1;
        }
    }
    debug_assert_eq!(pos, g.bits.len());
    CanonicalCode { shape, c, a, m }
}

/// Canonical form to genotype; inverse of [`decode`].
pub fn encode(c: &CanonicalCode) -> Result<CodeGenotype> {
    let c = CanonicalCode::new(c.shape, c.c.clone(), c.a.clone(), c.m.clone())?;
    let shape = c.shape;
    let mut bits = BitVec::zeros(shape.genotype_length());
    let mut pos = 0;
    if shape.css {
        write_block(&mut bits, &mut pos, &c.a1());
        write_block(&mut bits, &mut pos, &c.a2());
        write_block(&mut bits, &mut pos, &c.c2());
    } else {
        write_block(&mut bits, &mut pos, &c.c);
        write_block(&mut bits, &mut pos, &c.a);
        let r = shape.r;
        for i in 0..r {
            let start = if shape.include_m_diagonal { i } else { i + 1 };
            for j in start..r {
                bits.set(pos, c.m.get(i, j));
                pos += 1;
            }
        }
    }
    Ok(CodeGenotype { shape, bits })
}

/// Builds the CSS code encoded by a CSS-layout genotype.
pub fn css_decode(g: &CodeGenotype) -> Result<StabiliserCode> {
    if !g.shape.css {
        return Err(invalid_arg("css_decode needs a CSS shape"));
    }
    Ok(build_code(&decode(g)))
}

impl Serialize for CodeGenotype {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("CodeGenotype", 4)?;
        st.serialize_field("shape", &self.shape)?;
        st.serialize_field("length", &self.bits.len())?;
        st.serialize_field("bits", &self.bits.to_string())?;
        st.serialize_field("hex", &self.to_hex())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CodeGenotype {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            shape: CodeShape,
            bits: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let bits = BitVec::parse(&raw.bits).map_err(serde::de::Error::custom)?;
        CodeGenotype::new(raw.shape, bits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn five_qubit_canonical() -> CanonicalCode {
        let shape = CodeShape::stabiliser(5, 1).unwrap().with_m_diagonal(true);
        CanonicalCode::new(
            shape,
            F2Matrix::parse_text("1\n0\n0\n1").unwrap(),
            F2Matrix::parse_text("1\n1\n1\n1").unwrap(),
            F2Matrix::parse_text("0010\n0011\n1100\n0100").unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn five_qubit_strings() {
        let canon = five_qubit_canonical();
        let g18 = encode(&canon).unwrap();
        assert_eq!(g18.len(), 18);
        assert_eq!(g18.sections(), "1001|1111|0010,011,00,0");
        assert_eq!(decode(&g18), canon);

        let mut short = canon.clone();
        short.shape = short.shape.with_m_diagonal(false);
        let g14 = encode(&short).unwrap();
        assert_eq!(g14.len(), 14);
        assert_eq!(g14.sections(), "1001|1111|010,11,0");
    }

    #[test]
    fn decode_string_from_sections() {
        let shape = CodeShape::stabiliser(5, 1).unwrap().with_m_diagonal(true);
        let bits = BitVec::parse("1001|1111|0010,011,00,0").unwrap();
        let g = CodeGenotype::new(shape, bits).unwrap();
        let canon = decode(&g);
        assert_eq!(canon.c.to_string(), "1\n0\n0\n1\n");
        assert_eq!(canon.a.to_string(), "1\n1\n1\n1\n");
        assert_eq!(canon.m.to_string(), "0010\n0011\n1100\n0100\n");
    }

    #[test]
    fn all_zero_decodes_to_zero() {
        for shape in [
            CodeShape::stabiliser(6, 2).unwrap(),
            CodeShape::new(6, 2, 2).unwrap().with_m_diagonal(true),
            CodeShape::css(6, 2, 1).unwrap(),
        ] {
            assert_eq!(decode(&CodeGenotype::zeros(shape)), CanonicalCode::zeros(shape));
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shapes = [
            CodeShape::stabiliser(7, 2).unwrap(),
            CodeShape::new(9, 2, 4).unwrap().with_m_diagonal(true),
            CodeShape::css(10, 3, 3).unwrap(),
        ];
        for i in 0..1000 {
            let g = CodeGenotype::random(shapes[i % 3], &mut rng);
            assert_eq!(encode(&decode(&g)).unwrap(), g);
        }
    }

    #[test]
    fn css_zero_example() {
        let shape = CodeShape::css(4, 1, 1).unwrap();
        let code = css_decode(&CodeGenotype::zeros(shape)).unwrap();
        assert_eq!(code.s.to_pauli_text(), "1000|0000\n0000|0100\n0000|0010\n");
        assert!(css_decode(&CodeGenotype::zeros(CodeShape::stabiliser(4, 1).unwrap())).is_err());
    }

    #[test]
    fn hex_roundtrip() {
        let shape = CodeShape::stabiliser(5, 1).unwrap().with_m_diagonal(true);
        let g = encode(&five_qubit_canonical()).unwrap();
        // 1001 1111 0010 0110 00 -> 9 f 2 6 0
        assert_eq!(g.to_hex(), "18:9f260");
        assert_eq!(CodeGenotype::from_hex(shape, "18:9f260").unwrap(), g);
        assert!(CodeGenotype::from_hex(shape, "18:9f261").is_err());
        assert!(CodeGenotype::from_hex(shape, "14:9f26").is_err());
        assert!(CodeGenotype::from_hex(shape, "9f260").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let g = encode(&five_qubit_canonical()).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains("\"hex\":\"18:9f260\""));
        let back: CodeGenotype = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
    }
}
