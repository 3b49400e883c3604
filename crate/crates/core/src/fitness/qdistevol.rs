//! Evolutionary search for a high-probability generating set of logical
//! operators.
//!
//! A genotype is a qubit permutation. Row reducing `(S; L)` with pivots taken
//! qubit by qubit in permuted order (X column, then Z column) yields rows of
//! low weight on the late qubits; rows outside `<S>` are candidate logicals.
//! A permutation scores the total probability of the best `2k` candidates
//! that are independent modulo `<S>`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::f2::F2Matrix;
use crate::genome::{pack_rows, StabiliserCode};
use crate::pauli::{ErrorModel, PackedPauli};
use crate::scalar::{CompensatedSum, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDistEvolParams {
    /// Permutations per generation; `None` means `2n`.
    pub population: Option<usize>,
    /// Permutations kept as parents; `None` means `max(1, n/2)`.
    pub pool: Option<usize>,
    pub generations: usize,
    pub seed: u64,
}

impl Default for QDistEvolParams {
    fn default() -> Self {
        QDistEvolParams {
            population: None,
            pool: None,
            generations: 100,
            seed: 0,
        }
    }
}

impl QDistEvolParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `(population, pool)` for `n` qubits.
    pub fn resolve(&self, n: usize) -> Result<(usize, usize)> {
        let population = self.population.unwrap_or(2 * n).max(1);
        let pool = self.pool.unwrap_or((n / 2).max(1));
        if pool == 0 || pool > population {
            return Err(invalid_arg(format!(
                "qdistevol pool {pool} must be in 1..={population}"
            )));
        }
        Ok((population, pool))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QDistEvolOutcome<T> {
    /// `2k x 2n` generators with `<S, L'> = <S, L>`.
    pub generators: F2Matrix,
    /// Sum of the generators' probabilities.
    pub probability: T,
    /// Smallest weight of any non-trivial logical seen; an upper bound on
    /// the distance.
    pub min_weight: usize,
    pub evaluations: u64,
}

/// Row of the reduced stack: operator plus its coefficients over `(S; L)`.
#[derive(Clone, Copy, Debug)]
struct Row {
    op: PackedPauli,
    coeffs: u128,
}

struct Problem<'a, T> {
    n: usize,
    ns: usize,
    nl: usize,
    rows: Vec<Row>,
    model: &'a ErrorModel<T>,
}

/// Basis of coefficient vectors modulo `<S>`, keyed by pivot bit.
#[derive(Default)]
struct QuotientBasis {
    basis: Vec<u128>,
}

impl QuotientBasis {
    fn insert(&mut self, mut v: u128) -> bool {
        for &b in &self.basis {
            let pivot = 127 - b.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v == 0 {
            return false;
        }
        let pivot = 127 - v.leading_zeros();
        for b in &mut self.basis {
            if *b >> pivot & 1 == 1 {
                *b ^= v;
            }
        }
        self.basis.push(v);
        true
    }
}

impl<'a, T: Real> Problem<'a, T> {
    fn new(s: &F2Matrix, l: &F2Matrix, model: &'a ErrorModel<T>) -> Result<Self> {
        if s.ncols() != l.ncols() || s.ncols() % 2 != 0 {
            return Err(invalid_arg("S and L need equal, even column counts"));
        }
        let n = s.ncols() / 2;
        let (ns, nl) = (s.nrows(), l.nrows());
        if ns + nl > 128 {
            return Err(invalid_arg("at most 128 generator rows are supported"));
        }
        let mut ops = pack_rows(s)?;
        ops.extend(pack_rows(l)?);
        let rows = ops
            .into_iter()
            .enumerate()
            .map(|(i, op)| Row { op, coeffs: 1 << i })
            .collect();
        Ok(Problem {
            n,
            ns,
            nl,
            rows,
            model,
        })
    }

    fn logical_part(&self, coeffs: u128) -> u128 {
        coeffs >> self.ns
    }

    fn probability(&self, op: PackedPauli) -> T {
        let (nx, ny, nz) = op.counts();
        self.model.probability_of_counts(self.n, nx, ny, nz)
    }

    /// Rows of the reduced stack that lie outside `<S>`.
    fn candidates(&self, perm: &[usize]) -> Vec<Row> {
        let mut rows = self.rows.clone();
        let mut pivot = 0;
        'outer: for &q in perm {
            for (xm, zm) in [(1u64 << q, 0u64), (0, 1u64 << q)] {
                if pivot == rows.len() {
                    break 'outer;
                }
                let hit = |r: &Row| r.op.x & xm != 0 || r.op.z & zm != 0;
                let Some(p) = (pivot..rows.len()).find(|&i| hit(&rows[i])) else {
                    continue;
                };
                rows.swap(pivot, p);
                let pr = rows[pivot];
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != pivot && hit(r) {
                        r.op = r.op.xor(pr.op);
                        r.coeffs ^= pr.coeffs;
                    }
                }
                pivot += 1;
            }
        }
        rows.retain(|r| self.logical_part(r.coeffs) != 0);
        rows
    }

    /// Greedy maximum-probability set of `nl` rows independent modulo
    /// `<S>`, completed from the original logical rows when needed.
    fn best_set(&self, mut candidates: Vec<(T, Row)>) -> (T, Vec<Row>) {
        candidates.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then((a.1.op.x, a.1.op.z).cmp(&(b.1.op.x, b.1.op.z)))
        });
        let originals = self.rows[self.ns..]
            .iter()
            .map(|r| (self.probability(r.op), *r));
        let mut basis = QuotientBasis::default();
        let mut chosen = Vec::with_capacity(self.nl);
        for (p, row) in candidates.into_iter().chain(originals) {
            if chosen.len() == self.nl {
                break;
            }
            if basis.insert(self.logical_part(row.coeffs)) {
                chosen.push((p, row));
            }
        }
        let total = chosen.iter().map(|(p, _)| *p).collect::<CompensatedSum<T>>().value();
        (total, chosen.into_iter().map(|(_, r)| r).collect())
    }

    fn score(&self, perm: &[usize]) -> (T, Vec<Row>) {
        let cands = self.candidates(perm);
        let scored = cands.iter().map(|r| (self.probability(r.op), *r)).collect();
        let (total, _) = self.best_set(scored);
        (total, cands)
    }
}

/// Runs the permutation search on explicit generators `s` (stabilisers) and
/// `l` (logicals).
pub fn qdistevol_generators<T: Real>(
    s: &F2Matrix,
    l: &F2Matrix,
    model: &ErrorModel<T>,
    params: &QDistEvolParams,
) -> Result<QDistEvolOutcome<T>> {
    let problem = Problem::new(s, l, model)?;
    let n = problem.n;
    let (population, pool) = params.resolve(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let identity: Vec<usize> = (0..n).collect();
    let mut perms = vec![identity.clone()];
    while perms.len() < population {
        let mut p = identity.clone();
        p.shuffle(&mut rng);
        perms.push(p);
    }

    // Every candidate seen, keyed by operator.
    let mut seen: BTreeMap<(u64, u64), Row> = BTreeMap::new();
    let mut evaluations = 0u64;
    for generation in 0..=params.generations {
        let mut scored: Vec<(T, Vec<usize>)> = Vec::with_capacity(perms.len());
        for perm in perms.drain(..) {
            let (fitness, cands) = problem.score(&perm);
            evaluations += 1;
            for row in cands {
                seen.entry((row.op.x, row.op.z)).or_insert(row);
            }
            scored.push((fitness, perm));
        }
        if generation == params.generations {
            break;
        }
        scored.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.1.cmp(&b.1))
        });
        scored.truncate(pool);
        for i in 0..population {
            let mut child = scored[i % scored.len()].1.clone();
            if n >= 2 {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                child.swap(a, b);
            }
            perms.push(child);
        }
    }

    let all: Vec<(T, Row)> = seen.values().map(|r| (problem.probability(r.op), *r)).collect();
    let min_weight = seen
        .values()
        .map(|r| r.op.weight())
        .chain(problem.rows[problem.ns..].iter().map(|r| r.op.weight()))
        .min()
        .unwrap_or(0);
    let (probability, chosen) = problem.best_set(all);
    let rows: Vec<_> = chosen.iter().map(|r| r.op.to_row(n)).collect();
    Ok(QDistEvolOutcome {
        generators: F2Matrix::from_rows(2 * n, &rows),
        probability,
        min_weight,
        evaluations,
    })
}

pub fn qdistevol<T: Real>(
    code: &StabiliserCode,
    model: &ErrorModel<T>,
    params: &QDistEvolParams,
) -> Result<QDistEvolOutcome<T>> {
    qdistevol_generators(&code.s, &code.l, model, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::{build_code, distance_exact, CanonicalCode, CodeGenotype, CodeShape};
    use rand::Rng;

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

    fn check_generators(code: &StabiliserCode, g: &F2Matrix) {
        let k = code.k();
        assert_eq!(g.nrows(), 2 * k);
        assert!(g.symplectic_gram(&code.s).unwrap().is_zero());
        let with_new = code.s.vstack(g).unwrap();
        let with_old = code.s.vstack(&code.l).unwrap();
        assert_eq!(with_new.rank(), code.n() + k);
        assert_eq!(with_new.vstack(&with_old).unwrap().rank(), code.n() + k);
    }

    #[test]
    fn five_qubit_reaches_distance_three() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let params = QDistEvolParams {
            generations: 50,
            ..Default::default()
        };
        let out = qdistevol(&code, &model, &params).unwrap();
        assert_eq!(out.min_weight, 3);
        check_generators(&code, &out.generators);
    }

    #[test]
    fn zero_generations_identity_only() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.01).unwrap();
        let params = QDistEvolParams {
            population: Some(1),
            pool: Some(1),
            generations: 0,
            seed: 5,
        };
        let out = qdistevol(&code, &model, &params).unwrap();
        assert_eq!(out.evaluations, 1);
        check_generators(&code, &out.generators);
    }

    #[test]
    fn random_codes_keep_span_and_bound_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let model = ErrorModel::<f64>::new(0.02, 0.01, 0.005).unwrap();
        for i in 0..40 {
            let n = rng.gen_range(2..=9);
            let k = rng.gen_range(1..n);
            let shape = CodeShape::stabiliser(n, k).unwrap().with_m_diagonal(true);
            let code = CodeGenotype::random(shape, &mut rng).to_code();
            let params = QDistEvolParams {
                generations: 10,
                seed: i,
                ..Default::default()
            };
            let out = qdistevol(&code, &model, &params).unwrap();
            check_generators(&code, &out.generators);
            assert!(out.min_weight >= distance_exact(&code).unwrap());
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let code = five_qubit();
        let model = ErrorModel::<f64>::depolarising(0.05).unwrap();
        let params = QDistEvolParams::default().with_seed(99);
        let a = qdistevol(&code, &model, &params).unwrap();
        let b = qdistevol(&code, &model, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_pool() {
        let params = QDistEvolParams {
            population: Some(2),
            pool: Some(3),
            ..Default::default()
        };
        assert!(params.resolve(5).is_err());
    }
}
