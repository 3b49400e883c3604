//! Undetectable error rate: the total probability of the non-trivial logical
//! operators `<S, L> \ <S>`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid_arg, Error, Result};
use crate::f2::F2Matrix;
use crate::genome::{enumerate_nontrivial, pack_rows, StabiliserCode, TypeHistogram};
use crate::pauli::{ErrorModel, PackedPauli};
use crate::scalar::Real;

use super::lincomb::{build_levels, PackedComb};
use super::qdistevol::{qdistevol_generators, QDistEvolParams};

/// Default largest `n + k` evaluated exactly.
pub const EXACT_FITNESS_CAP: usize = 20;

/// Depth used by default when the exact evaluation is too expensive.
pub const DEFAULT_APPROX_DEPTH: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FitnessMode {
    Exact,
    Approximate { t: usize },
}

impl FitnessMode {
    /// Exact when `n + k <= 20`, otherwise approximate at depth 3.
    pub fn default_for(n: usize, k: usize) -> Self {
        if n + k <= EXACT_FITNESS_CAP {
            FitnessMode::Exact
        } else {
            FitnessMode::Approximate {
                t: DEFAULT_APPROX_DEPTH.min(max_depth(n, k)),
            }
        }
    }

    pub fn depth(&self) -> Option<usize> {
        match self {
            FitnessMode::Exact => None,
            FitnessMode::Approximate { t } => Some(*t),
        }
    }
}

impl fmt::Display for FitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitnessMode::Exact => f.write_str("exact"),
            FitnessMode::Approximate { t } => write!(f, "approx:{t}"),
        }
    }
}

impl FromStr for FitnessMode {
    type Err = Error;

    /// `exact` or `approx:<t>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "exact" {
            return Ok(FitnessMode::Exact);
        }
        let t = s
            .strip_prefix("approx:")
            .ok_or_else(|| Error::Parse(format!("fitness mode {s:?} is not 'exact' or 'approx:<t>'")))?;
        let t = t
            .parse()
            .map_err(|e| Error::Parse(format!("bad approximation depth {t:?}: {e}")))?;
        if t == 0 {
            return Err(Error::Parse("approximation depth must be at least 1".into()));
        }
        Ok(FitnessMode::Approximate { t })
    }
}

impl Serialize for FitnessMode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FitnessMode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `ceil((n + k) / 2)`.
pub fn max_depth(n: usize, k: usize) -> usize {
    (n + k).div_ceil(2)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationCost {
    /// Non-trivial logical operators whose probabilities were summed.
    pub terms: u64,
    /// Row additions spent generating linear combinations.
    pub additions: u64,
    /// Permutations scored by the generator search.
    pub permutations: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitnessReport<T> {
    /// Undetectable error rate, or its lower-bound estimate.
    pub value: T,
    pub mode: FitnessMode,
    /// Logical generators the value was computed from.
    pub logical_generators: F2Matrix,
    pub cost: EvaluationCost,
}

#[derive(Serialize)]
struct ReportJson<T> {
    value: T,
    mode: &'static str,
    t: Option<usize>,
    cost: EvaluationCost,
    logical_generators: Vec<String>,
}

impl<T: Real> FitnessReport<T> {
    pub fn to_json(&self) -> serde_json::Value {
        let json = ReportJson {
            value: self.value,
            mode: match self.mode {
                FitnessMode::Exact => "exact",
                FitnessMode::Approximate { .. } => "approximate",
            },
            t: self.mode.depth(),
            cost: self.cost,
            logical_generators: self.logical_generators.to_pauli_text().lines().map(str::to_owned).collect(),
        };
        serde_json::to_value(json).expect("report serialises")
    }
}

fn check_generators(s: &F2Matrix, l: &F2Matrix) -> Result<(usize, usize)> {
    if s.ncols() != l.ncols() || s.ncols() % 2 != 0 {
        return Err(invalid_arg("S and L need equal, even column counts"));
    }
    if l.nrows() % 2 != 0 {
        return Err(invalid_arg("L needs an even number of rows"));
    }
    Ok((s.ncols() / 2, l.nrows() / 2))
}

/// Exact rate from explicit generators, enumerating all `2^(rows)`
/// combinations when `n + k <= cap`.
pub fn uer_exact_generators<T: Real>(
    s: &F2Matrix,
    l: &F2Matrix,
    model: &ErrorModel<T>,
    cap: usize,
) -> Result<FitnessReport<T>> {
    let (n, k) = check_generators(s, l)?;
    if n + k > cap {
        return Err(Error::ResourceLimit(format!(
            "exact evaluation needs n + k <= {cap} (got {}); use uer_approx",
            n + k
        )));
    }
    let hist = enumerate_nontrivial(s, l)?;
    Ok(FitnessReport {
        value: hist.probability(model),
        mode: FitnessMode::Exact,
        logical_generators: l.clone(),
        cost: EvaluationCost {
            terms: hist.total(),
            ..Default::default()
        },
    })
}

pub fn uer_exact<T: Real>(code: &StabiliserCode, model: &ErrorModel<T>) -> Result<FitnessReport<T>> {
    uer_exact_generators(&code.s, &code.l, model, EXACT_FITNESS_CAP)
}

pub fn uer_exact_capped<T: Real>(
    code: &StabiliserCode,
    model: &ErrorModel<T>,
    cap: usize,
) -> Result<FitnessReport<T>> {
    uer_exact_generators(&code.s, &code.l, model, cap)
}

/// Histogram of the non-trivial members of `<S,L>_{+t} ∪ <S,L>_{-t}`, each
/// coefficient vector counted once.
pub(crate) fn truncated_histogram(s: &F2Matrix, l: &F2Matrix, t: usize) -> Result<(TypeHistogram, u64)> {
    let n = s.ncols() / 2;
    let ns = s.nrows();
    let total_rows = ns + l.nrows();
    if total_rows > 128 {
        return Err(invalid_arg("at most 128 generator rows are supported"));
    }
    let mut ops = pack_rows(s)?;
    ops.extend(pack_rows(l)?);
    let rows: Vec<PackedComb> = ops.iter().map(|&op| PackedComb { coeffs: 0, op }).collect();
    let all_coeffs: u128 = if total_rows == 128 { u128::MAX } else { (1u128 << total_rows) - 1 };
    let all_op = ops.iter().fold(PackedPauli::default(), |a, &b| a.xor(b));
    let (levels, additions) = build_levels(&rows, PackedComb::default(), t);

    let mut hist = TypeHistogram::new(n);
    for (w, level) in levels.iter().enumerate() {
        let with_complement = w + t < total_rows;
        for c in level {
            if c.coeffs >> ns != 0 {
                hist.add_packed(c.op);
            }
            if with_complement && (c.coeffs ^ all_coeffs) >> ns != 0 {
                hist.add_packed(c.op.xor(all_op));
            }
        }
    }
    Ok((hist, additions))
}

/// Two-stage estimate from explicit generators: a generator search replaces
/// `l` by a high-probability generating set, then the combinations of at
/// most `t` rows and their complements are summed.
pub fn uer_approx_generators<T: Real>(
    s: &F2Matrix,
    l: &F2Matrix,
    model: &ErrorModel<T>,
    t: usize,
    params: &QDistEvolParams,
) -> Result<FitnessReport<T>> {
    let (n, k) = check_generators(s, l)?;
    if t == 0 || t > max_depth(n, k) {
        return Err(invalid_arg(format!(
            "approximation depth {t} outside 1..={}",
            max_depth(n, k)
        )));
    }
    let search = qdistevol_generators(s, l, model, params)?;
    let (hist, additions) = truncated_histogram(s, &search.generators, t)?;
    Ok(FitnessReport {
        value: hist.probability(model),
        mode: FitnessMode::Approximate { t },
        logical_generators: search.generators,
        cost: EvaluationCost {
            terms: hist.total(),
            additions,
            permutations: search.evaluations,
        },
    })
}

pub fn uer_approx<T: Real>(
    code: &StabiliserCode,
    model: &ErrorModel<T>,
    t: usize,
    params: &QDistEvolParams,
) -> Result<FitnessReport<T>> {
    uer_approx_generators(&code.s, &code.l, model, t, params)
}

/// Evaluates `code` in the given mode.
pub fn evaluate<T: Real>(
    code: &StabiliserCode,
    model: &ErrorModel<T>,
    mode: FitnessMode,
    params: &QDistEvolParams,
) -> Result<FitnessReport<T>> {
    match mode {
        FitnessMode::Exact => uer_exact_capped(code, model, usize::MAX),
        FitnessMode::Approximate { t } => uer_approx(code, model, t, params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::BitVec;
    use crate::genome::{build_code, CanonicalCode, CodeGenotype, CodeShape};
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
    fn single_qubit_harness() {
        let s = F2Matrix::zeros(0, 2);
        let l = F2Matrix::parse_text("0|1\n1|0").unwrap();
        let model = ErrorModel::<f64>::new(0.03, 0.02, 0.01).unwrap();
        let r = uer_exact_generators(&s, &l, &model, EXACT_FITNESS_CAP).unwrap();
        assert_eq!(r.cost.terms, 3);
        assert!((r.value - 0.06).abs() < 1e-15);
    }

    // Sums probabilities over an explicit set of operator rows in ascending
    // order, without histograms or packing.
    fn brute_force(code: &StabiliserCode, model: &ErrorModel<f64>) -> (f64, usize) {
        let stack = code.s.vstack(&code.l).unwrap();
        let rows = stack.nrows();
        let ns = code.s.nrows();
        let mut probs = Vec::new();
        for u in 0u64..(1 << rows) {
            if u >> ns == 0 {
                continue;
            }
            let coeffs = BitVec::from_bools(&(0..rows).map(|i| u >> i & 1 == 1).collect::<Vec<_>>());
            probs.push(model.row_probability(&stack.left_mul_vec(&coeffs)));
        }
        probs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (probs.iter().sum(), probs.len())
    }

    #[test]
    fn five_qubit_matches_brute_force_and_bound() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let r = uer_exact(&code, &model).unwrap();
        let (expected, count) = brute_force(&code, &model);
        assert_eq!(count, 48);
        assert_eq!(r.cost.terms, 48);
        assert!((r.value - expected).abs() <= 1e-15 * expected);
        assert!(r.value <= 48.0 * 0.01f64.powi(3));
        // 30 weight-3 and 18 weight-5 operators
        let closed = 30.0 * 1e-6 * 0.97f64.powi(2) + 18.0 * 1e-10;
        assert!((r.value - closed).abs() <= 1e-14 * closed);
    }

    #[test]
    fn cap_names_the_approximation() {
        let shape = CodeShape::stabiliser(16, 5).unwrap();
        let code = CodeGenotype::zeros(shape).to_code();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        match uer_exact(&code, &model) {
            Err(Error::ResourceLimit(msg)) => assert!(msg.contains("uer_approx")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn full_depth_is_exact_and_depths_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let model = ErrorModel::<f64>::new(0.02, 0.01, 0.03).unwrap();
        for i in 0..30 {
            let n = rng.gen_range(2..=8);
            let k = rng.gen_range(1..n);
            if n + k > 12 {
                continue;
            }
            let shape = CodeShape::stabiliser(n, k).unwrap().with_m_diagonal(true);
            let code = CodeGenotype::random(shape, &mut rng).to_code();
            let exact = uer_exact(&code, &model).unwrap().value;
            let params = QDistEvolParams::default().with_seed(i);
            let mut prev = 0.0;
            for t in 1..=max_depth(n, k) {
                let v = uer_approx(&code, &model, t, &params).unwrap().value;
                assert!(v >= prev, "t={t}");
                assert!(v <= exact);
                prev = v;
            }
            assert_eq!(prev, exact);
        }
    }

    #[test]
    fn depth_bounds() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let params = QDistEvolParams::default();
        assert!(uer_approx(&code, &model, 0, &params).is_err());
        assert!(uer_approx(&code, &model, 4, &params).is_err());
        let r = uer_approx(&code, &model, 1, &params).unwrap();
        assert!(r.value > 0.0);
        assert_eq!(r.mode, FitnessMode::Approximate { t: 1 });
    }

    #[test]
    fn modes_parse_and_default() {
        assert_eq!("exact".parse::<FitnessMode>().unwrap(), FitnessMode::Exact);
        assert_eq!("approx:4".parse::<FitnessMode>().unwrap(), FitnessMode::Approximate { t: 4 });
        assert!("approx:0".parse::<FitnessMode>().is_err());
        assert!("fast".parse::<FitnessMode>().is_err());
        assert_eq!(FitnessMode::default_for(12, 1), FitnessMode::Exact);
        assert_eq!(FitnessMode::default_for(20, 1), FitnessMode::Approximate { t: 3 });
        assert_eq!(FitnessMode::Approximate { t: 2 }.to_string(), "approx:2");
    }

    #[test]
    fn report_json() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let j = uer_exact(&code, &model).unwrap().to_json();
        assert_eq!(j["mode"], "exact");
        assert!(j["t"].is_null());
        assert_eq!(j["cost"]["terms"], 48);
        assert_eq!(j["logical_generators"][0], "00000|11111");
    }
}
