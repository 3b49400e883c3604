//! (μ, λ) search over genotypes, minimising the undetectable error rate.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::f2::BitVec;
use crate::fitness::{max_depth, uer_approx, uer_exact_capped, FitnessMode, QDistEvolParams};
use crate::genome::{distance_exact, CodeGenotype, CodeShape, DISTANCE_ENUMERATION_CAP};
use crate::pauli::ErrorModel;
use crate::rng::{mix, stream, Purpose};
use crate::scalar::Real;

use super::operators::{cross, CrossType, MutationMode, DEFAULT_MUTATION_RATE};

pub const DEFAULT_MAX_GENERATIONS: usize = 1000;
pub const DEFAULT_LAMBDA_MU_RATIO: f64 = 20.0;

/// Divisor of `lambda` nearest to `ratio`; the smaller one on ties.
pub fn nearest_divisor(lambda: usize, ratio: f64) -> usize {
    (1..=lambda.max(1))
        .filter(|d| lambda % d == 0)
        .min_by(|&a, &b| {
            let da = (a as f64 - ratio).abs();
            let db = (b as f64 - ratio).abs();
            da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        })
        .unwrap_or(1)
}

/// Search shape for `[[n, k]]`: `r = n - k`, with the diagonal of `M` only
/// for models that are not depolarising.
pub fn default_shape<T: Real>(n: usize, k: usize, model: &ErrorModel<T>) -> Result<CodeShape> {
    Ok(CodeShape::stabiliser(n, k)?.with_m_diagonal(!model.is_depolarising()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SearchConfig<T> {
    pub shape: CodeShape,
    pub model: ErrorModel<T>,
    /// Population size λ.
    pub lambda: usize,
    /// Parents kept each generation, μ.
    pub mu: usize,
    pub max_generations: usize,
    pub mutation: MutationMode,
    pub cross: CrossType,
    pub fitness: FitnessMode,
    /// Generator-search settings for approximate fitness; the seed is
    /// derived per genotype.
    pub qdist: QDistEvolParams,
    pub target_distance: Option<usize>,
    pub target_fitness: Option<T>,
    pub seed: u64,
}

impl<T: Real> SearchConfig<T> {
    /// λ equal to the genotype length, λ/μ as close to 20 as divisibility
    /// allows, no crossover, single-bit mutation, 1000 generations.
    pub fn new(shape: CodeShape, model: ErrorModel<T>, seed: u64) -> Self {
        let lambda = shape.genotype_length().max(1);
        SearchConfig {
            shape,
            model,
            lambda,
            mu: lambda / nearest_divisor(lambda, DEFAULT_LAMBDA_MU_RATIO),
            max_generations: DEFAULT_MAX_GENERATIONS,
            mutation: MutationMode::SingleBit,
            cross: CrossType::None,
            fitness: FitnessMode::default_for(shape.n, shape.k),
            qdist: QDistEvolParams::default(),
            target_distance: None,
            target_fitness: None,
            seed,
        }
    }

    /// Sets λ and picks μ from the ratio λ/μ.
    pub fn with_lambda_ratio(mut self, lambda: usize, ratio: f64) -> Self {
        self.lambda = lambda;
        self.mu = lambda / nearest_divisor(lambda, ratio);
        self
    }

    /// Enables crossover; per-bit mutation at the default rate replaces
    /// single-bit mutation.
    pub fn with_cross(mut self, cross: CrossType) -> Self {
        self.cross = cross;
        if cross != CrossType::None && self.mutation == MutationMode::SingleBit {
            self.mutation = MutationMode::PerBit {
                rate: DEFAULT_MUTATION_RATE,
            };
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.lambda == 0 || self.mu == 0 {
            return Err(invalid_arg("population sizes must be positive"));
        }
        if self.mu > self.lambda {
            return Err(invalid_arg(format!("mu = {} exceeds lambda = {}", self.mu, self.lambda)));
        }
        if self.cross == CrossType::None && self.lambda % self.mu != 0 {
            return Err(invalid_arg(format!(
                "mu = {} must divide lambda = {} without crossover",
                self.mu, self.lambda
            )));
        }
        let (n, k) = (self.shape.n, self.shape.k);
        if n > 64 {
            return Err(invalid_arg("fitness evaluation supports at most 64 qubits"));
        }
        match self.fitness {
            FitnessMode::Exact if n + k >= 63 => {
                return Err(invalid_arg("exact fitness is infeasible at this size"));
            }
            FitnessMode::Approximate { t } if t == 0 || t > max_depth(n, k) => {
                return Err(invalid_arg(format!(
                    "approximation depth {t} outside 1..={}",
                    max_depth(n, k)
                )));
            }
            _ => {}
        }
        if self.target_distance.is_some() && n + k > DISTANCE_ENUMERATION_CAP {
            return Err(invalid_arg(format!(
                "a target distance needs exact distances, n + k <= {DISTANCE_ENUMERATION_CAP}"
            )));
        }
        self.qdist.resolve(n)?;
        Ok(())
    }

    /// Fitness of one genotype; a pure function of the genotype and config.
    pub fn fitness_of(&self, g: &CodeGenotype) -> Result<T> {
        let code = g.to_code();
        match self.fitness {
            FitnessMode::Exact => Ok(uer_exact_capped(&code, &self.model, usize::MAX)?.value),
            FitnessMode::Approximate { t } => {
                let mut key = vec![self.seed, g.len() as u64];
                key.extend_from_slice(g.bits.words());
                let params = self.qdist.with_seed(mix(&key));
                Ok(uer_approx(&code, &self.model, t, &params)?.value)
            }
        }
    }

    fn distance_known(&self) -> bool {
        self.shape.n + self.shape.k <= DISTANCE_ENUMERATION_CAP
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Trace<T> {
    pub generation: Vec<usize>,
    /// Best fitness within each generation.
    pub best_fitness: Vec<T>,
    pub best_so_far: Vec<T>,
    /// Distance of the best-so-far code, when computable.
    pub distance: Vec<Option<usize>>,
}

impl<T: Real> Trace<T> {
    pub fn len(&self) -> usize {
        self.generation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generation.is_empty()
    }

    /// `generation,best_fitness,best_so_far,distance`, one line per
    /// generation; unknown distances are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,best_fitness,best_so_far,distance\n");
        for i in 0..self.len() {
            let d = self.distance[i].map(|d| d.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", self.generation[i], self.best_fitness[i], self.best_so_far[i], d).unwrap();
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SearchResult<T> {
    pub best: CodeGenotype,
    pub best_fitness: T,
    pub best_distance: Option<usize>,
    pub generation_found: usize,
    pub generations_run: usize,
    /// Distinct genotypes whose fitness was computed.
    pub evaluations: u64,
    pub target_reached: bool,
    pub trace: Trace<T>,
    pub config: SearchConfig<T>,
    pub seed: u64,
}

impl<T: Real> SearchResult<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("search result serialises")
    }
}

fn initial_population(cfg: &SearchConfig<impl Real>) -> Vec<CodeGenotype> {
    (0..cfg.lambda)
        .map(|i| CodeGenotype::random(cfg.shape, &mut stream(cfg.seed, 0, i as u64, Purpose::Initial)))
        .collect()
}

/// Offspring of `parents` for `generation`, each with the index of the
/// parent it was derived from (the first parent for crossover children).
pub(crate) fn next_generation<T: Real>(
    cfg: &SearchConfig<T>,
    parents: &[CodeGenotype],
    generation: usize,
) -> Result<Vec<(CodeGenotype, usize)>> {
    let g = generation as u64;
    let mut out = Vec::with_capacity(cfg.lambda);
    if cfg.cross == CrossType::None {
        let per_parent = cfg.lambda / parents.len();
        for (i, p) in parents.iter().enumerate() {
            for j in 0..per_parent {
                let idx = (i * per_parent + j) as u64;
                let mut rng = stream(cfg.seed, g, idx, Purpose::Mutation);
                out.push((cfg.mutation.apply(p, &mut rng), i));
            }
        }
        return Ok(out);
    }
    let mu = parents.len();
    let mut pair = 0usize;
    while out.len() < cfg.lambda {
        let (ia, ib) = ((2 * pair) % mu, (2 * pair + 1) % mu);
        let mut rng = stream(cfg.seed, g, pair as u64, Purpose::Crossover);
        let (c, d) = cross(&parents[ia], &parents[ib], cfg.cross, &mut rng)?;
        for (child, parent) in [(c, ia), (d, ib)] {
            if out.len() == cfg.lambda {
                break;
            }
            let idx = out.len() as u64;
            let mut rng = stream(cfg.seed, g, idx, Purpose::Mutation);
            out.push((cfg.mutation.apply(&child, &mut rng), parent));
        }
        pair += 1;
    }
    Ok(out)
}

/// Fitness for every member of `pop`, computing uncached values in parallel.
fn evaluate_population<T: Real>(
    cfg: &SearchConfig<T>,
    pop: &[CodeGenotype],
    cache: &mut HashMap<BitVec, T>,
) -> Result<Vec<T>> {
    let mut seen = HashSet::new();
    let missing: Vec<&CodeGenotype> = pop
        .iter()
        .filter(|g| !cache.contains_key(&g.bits) && seen.insert(&g.bits))
        .collect();
    let values: Vec<Result<T>> = missing.par_iter().map(|g| cfg.fitness_of(g)).collect();
    for (g, v) in missing.iter().zip(values) {
        cache.insert(g.bits.clone(), v?);
    }
    Ok(pop.iter().map(|g| cache[&g.bits]).collect())
}

fn compare<T: Real>(a: (T, &BitVec), b: (T, &BitVec)) -> std::cmp::Ordering {
    a.0.partial_cmp(&b.0)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then_with(|| a.1.cmp(b.1))
}

pub fn run_search<T: Real>(cfg: &SearchConfig<T>) -> Result<SearchResult<T>> {
    cfg.validate()?;
    let mut cache: HashMap<BitVec, T> = HashMap::new();
    let mut pop = initial_population(cfg);
    let mut trace = Trace::default();
    let mut best: Option<(T, CodeGenotype)> = None;
    let mut best_distance = None;
    let mut generation_found = 0;
    let mut target_reached = false;
    let mut generation = 0;

    loop {
        let fits = evaluate_population(cfg, &pop, &mut cache)?;
        let mut order: Vec<usize> = (0..pop.len()).collect();
        order.sort_by(|&a, &b| compare((fits[a], &pop[a].bits), (fits[b], &pop[b].bits)));
        let top = order[0];
        let improved = best.as_ref().is_none_or(|(f, _)| fits[top] < *f);
        if improved {
            best = Some((fits[top], pop[top].clone()));
            generation_found = generation;
            if cfg.distance_known() {
                best_distance = Some(distance_exact(&pop[top].to_code())?);
            }
        }
        let best_fit = best.as_ref().map(|b| b.0).expect("population is non-empty");
        trace.generation.push(generation);
        trace.best_fitness.push(fits[top]);
        trace.best_so_far.push(best_fit);
        trace.distance.push(best_distance);

        let distance_met = matches!((cfg.target_distance, best_distance), (Some(t), Some(d)) if d >= t);
        let fitness_met = cfg.target_fitness.is_some_and(|t| best_fit <= t);
        if distance_met || fitness_met {
            target_reached = true;
            break;
        }
        if generation == cfg.max_generations {
            break;
        }
        let parents: Vec<CodeGenotype> = order[..cfg.mu].iter().map(|&i| pop[i].clone()).collect();
        generation += 1;
        pop = next_generation(cfg, &parents, generation)?
            .into_iter()
            .map(|(g, _)| g)
            .collect();
    }

    let (best_fitness, best) = best.expect("at least one generation ran");
    Ok(SearchResult {
        best,
        best_fitness,
        best_distance,
        generation_found,
        generations_run: generation,
        evaluations: cache.len() as u64,
        target_reached,
        trace,
        config: cfg.clone(),
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn depolarising() -> ErrorModel<f64> {
        ErrorModel::depolarising(0.01).unwrap()
    }

    #[test]
    fn divisor_choice() {
        assert_eq!(nearest_divisor(14, 20.0), 14);
        assert_eq!(nearest_divisor(35, 20.0), 7);
        assert_eq!(nearest_divisor(77, 20.0), 11);
        assert_eq!(nearest_divisor(40, 20.0), 20);
        assert_eq!(nearest_divisor(1, 20.0), 1);
        // 4 and 6 are equally far from 5 for 12; the smaller wins
        assert_eq!(nearest_divisor(12, 5.0), 4);
    }

    #[test]
    fn defaults() {
        let shape = default_shape(12, 1, &depolarising()).unwrap();
        let cfg = SearchConfig::new(shape, depolarising(), 1);
        assert_eq!((cfg.lambda, cfg.mu), (77, 7));
        assert_eq!(cfg.max_generations, 1000);
        assert_eq!(cfg.cross, CrossType::None);
        assert_eq!(cfg.mutation, MutationMode::SingleBit);
        assert_eq!(cfg.fitness, FitnessMode::Exact);
        let biased = ErrorModel::new(0.01, 0.01, 0.001).unwrap();
        assert!(default_shape(5, 1, &biased).unwrap().include_m_diagonal);
        let crossed = cfg.with_cross(CrossType::Uniform);
        assert_eq!(crossed.mutation, MutationMode::PerBit { rate: 0.05 });
    }

    #[test]
    fn infeasible_configs() {
        let shape = CodeShape::stabiliser(3, 2).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 0);
        cfg.mu = cfg.lambda + 1;
        assert!(run_search(&cfg).is_err());
        let mut cfg = SearchConfig::new(CodeShape::stabiliser(5, 1).unwrap(), depolarising(), 0);
        cfg.mu = 3;
        assert!(cfg.validate().is_err());
        cfg.cross = CrossType::OnePoint;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn zero_generations() {
        let shape = default_shape(5, 1, &depolarising()).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 3);
        cfg.max_generations = 0;
        let res = run_search(&cfg).unwrap();
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.generations_run, 0);
        let pop = initial_population(&cfg);
        let min = pop.iter().map(|g| cfg.fitness_of(g).unwrap()).fold(f64::INFINITY, f64::min);
        assert_eq!(res.best_fitness, min);
    }

    #[test]
    fn children_are_one_flip_from_parents() {
        let shape = default_shape(8, 1, &depolarising()).unwrap();
        let cfg = SearchConfig::new(shape, depolarising(), 4);
        let parents: Vec<_> = initial_population(&cfg).into_iter().take(cfg.mu).collect();
        let kids = next_generation(&cfg, &parents, 1).unwrap();
        assert_eq!(kids.len(), cfg.lambda);
        for (child, p) in kids {
            assert_eq!(child.bits.hamming_distance(&parents[p].bits), 1);
        }
    }

    #[test]
    fn crossover_fills_population() {
        let shape = default_shape(6, 1, &depolarising()).unwrap();
        let cfg = SearchConfig::new(shape, depolarising(), 4)
            .with_lambda_ratio(11, 4.0)
            .with_cross(CrossType::TwoPoint);
        let parents: Vec<_> = initial_population(&cfg).into_iter().take(3).collect();
        assert_eq!(next_generation(&cfg, &parents, 1).unwrap().len(), 11);
    }

    #[test]
    fn best_so_far_is_monotone_and_elitist() {
        let shape = default_shape(6, 1, &depolarising()).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 11);
        cfg.max_generations = 40;
        let res = run_search(&cfg).unwrap();
        assert_eq!(res.trace.len(), 41);
        for w in res.trace.best_so_far.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for (&gen_best, &sofar) in res.trace.best_fitness.iter().zip(&res.trace.best_so_far) {
            assert!(res.best_fitness <= gen_best);
            assert!(sofar >= res.best_fitness);
        }
        assert_eq!(cfg.fitness_of(&res.best).unwrap(), res.best_fitness);
    }

    #[test]
    fn reproducible_and_csv() {
        let shape = default_shape(5, 1, &depolarising()).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 5);
        cfg.max_generations = 20;
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let csv = a.trace.to_csv();
        assert!(csv.starts_with("generation,best_fitness,best_so_far,distance\n0,"));
        assert_eq!(csv.lines().count(), a.trace.len() + 1);
        let back: SearchResult<f64> = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn target_distance_stops_early() {
        let shape = default_shape(5, 1, &depolarising()).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 2);
        cfg.target_distance = Some(1);
        let res = run_search(&cfg).unwrap();
        assert!(res.target_reached);
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn approximate_fitness_runs() {
        let shape = default_shape(6, 1, &depolarising()).unwrap();
        let mut cfg = SearchConfig::new(shape, depolarising(), 8);
        cfg.fitness = FitnessMode::Approximate { t: 2 };
        cfg.qdist.generations = 5;
        cfg.max_generations = 3;
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a, b);
    }
}
