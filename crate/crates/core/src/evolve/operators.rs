//! Mutation and crossover on genotype bit strings.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid_arg, Error, Result};
use crate::genome::CodeGenotype;

/// Per-bit mutation rate used with crossover unless overridden.
pub const DEFAULT_MUTATION_RATE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MutationMode {
    /// Flip exactly one uniformly chosen bit.
    SingleBit,
    /// Flip each bit independently with the given probability.
    PerBit { rate: f64 },
}

impl MutationMode {
    pub fn apply<R: Rng + ?Sized>(&self, g: &CodeGenotype, rng: &mut R) -> CodeGenotype {
        match *self {
            MutationMode::SingleBit => mutate_single_bit(g, rng),
            MutationMode::PerBit { rate } => mutate_per_bit(g, rate, rng),
        }
    }
}

impl fmt::Display for MutationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationMode::SingleBit => f.write_str("single-bit"),
            MutationMode::PerBit { rate } => write!(f, "per-bit:{rate}"),
        }
    }
}

impl FromStr for MutationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "single-bit" => Ok(MutationMode::SingleBit),
            other => {
                let rate = other
                    .strip_prefix("per-bit:")
                    .ok_or_else(|| Error::Parse(format!("unknown mutation mode {other:?}")))?;
                let rate: f64 = rate
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad mutation rate {rate:?}: {e}")))?;
                if !(0.0..=1.0).contains(&rate) {
                    return Err(Error::Parse(format!("mutation rate {rate} outside [0, 1]")));
                }
                Ok(MutationMode::PerBit { rate })
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CrossType {
    None,
    OnePoint,
    TwoPoint,
    ThreePoint,
    Uniform,
    HalfUniform,
}

impl CrossType {
    fn cut_count(self) -> Option<usize> {
        match self {
            CrossType::OnePoint => Some(1),
            CrossType::TwoPoint => Some(2),
            CrossType::ThreePoint => Some(3),
            _ => None,
        }
    }
}

impl fmt::Display for CrossType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossType::None => "none",
            CrossType::OnePoint => "1-point",
            CrossType::TwoPoint => "2-point",
            CrossType::ThreePoint => "3-point",
            CrossType::Uniform => "uniform",
            CrossType::HalfUniform => "half-uniform",
        })
    }
}

impl FromStr for CrossType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "none" => CrossType::None,
            "1-point" | "one-point" => CrossType::OnePoint,
            "2-point" | "two-point" => CrossType::TwoPoint,
            "3-point" | "three-point" => CrossType::ThreePoint,
            "uniform" => CrossType::Uniform,
            "half-uniform" => CrossType::HalfUniform,
            other => return Err(Error::Parse(format!("unknown cross type {other:?}"))),
        })
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(MutationMode);
string_serde!(CrossType);

pub fn mutate_single_bit<R: Rng + ?Sized>(g: &CodeGenotype, rng: &mut R) -> CodeGenotype {
    let mut out = g.clone();
    if !g.is_empty() {
        out.bits.flip(rng.gen_range(0..g.len()));
    }
    out
}

pub fn mutate_per_bit<R: Rng + ?Sized>(g: &CodeGenotype, rate: f64, rng: &mut R) -> CodeGenotype {
    let mut out = g.clone();
    for i in 0..g.len() {
        if rng.gen_bool(rate) {
            out.bits.flip(i);
        }
    }
    out
}

/// Swaps alternate segments between sorted cut points: positions
/// `cuts[0]..cuts[1]`, `cuts[2]..cuts[3]`, ... (with `len` closing an odd
/// list) are exchanged.
pub fn cross_at(a: &CodeGenotype, b: &CodeGenotype, cuts: &[usize]) -> Result<(CodeGenotype, CodeGenotype)> {
    check_pair(a, b)?;
    let len = a.len();
    if cuts.windows(2).any(|w| w[0] >= w[1]) || cuts.iter().any(|&c| c == 0 || c >= len) {
        return Err(invalid_arg("cut points must be strictly increasing within 1..len"));
    }
    let (mut c, mut d) = (a.clone(), b.clone());
    for pair in cuts.chunks(2) {
        let end = pair.get(1).copied().unwrap_or(len);
        for i in pair[0]..end {
            c.bits.set(i, b.bits.get(i));
            d.bits.set(i, a.bits.get(i));
        }
    }
    Ok((c, d))
}

fn check_pair(a: &CodeGenotype, b: &CodeGenotype) -> Result<()> {
    if a.shape != b.shape || a.len() != b.len() {
        return Err(invalid_arg("crossover needs parents of the same shape"));
    }
    Ok(())
}

pub fn cross<R: Rng + ?Sized>(
    a: &CodeGenotype,
    b: &CodeGenotype,
    kind: CrossType,
    rng: &mut R,
) -> Result<(CodeGenotype, CodeGenotype)> {
    check_pair(a, b)?;
    let len = a.len();
    if let Some(k) = kind.cut_count() {
        if len < 2 {
            return Ok((a.clone(), b.clone()));
        }
        let k = k.min(len.saturating_sub(1));
        let mut cuts: Vec<usize> = sample(rng, len - 1, k).into_iter().map(|c| c + 1).collect();
        cuts.sort_unstable();
        return cross_at(a, b, &cuts);
    }
    let (mut c, mut d) = (a.clone(), b.clone());
    match kind {
        CrossType::Uniform => {
            for i in 0..len {
                if rng.gen_bool(0.5) {
                    c.bits.set(i, b.bits.get(i));
                    d.bits.set(i, a.bits.get(i));
                }
            }
        }
        CrossType::HalfUniform => {
            for i in 0..len {
                if a.bits.get(i) != b.bits.get(i) && rng.gen_bool(0.5) {
                    c.bits.flip(i);
                    d.bits.flip(i);
                }
            }
        }
        _ => return Err(invalid_arg("cross type 'none' cannot be applied")),
    }
    Ok((c, d))
}
