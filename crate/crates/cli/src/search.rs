use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use stabevo::evolve::{run_search, CrossType, MutationMode, SearchConfig};
use stabevo::fitness::FitnessMode;

use crate::{parse_model, write_file, CliError, CliResult, ShapeArgs, EXIT_OK, EXIT_TARGET_MISSED};

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    /// `depolarising:<p>` or `pauli:<px>,<py>,<pz>`.
    #[arg(long, default_value = "depolarising:0.01")]
    pub model: String,
    /// Population size (default: genotype length).
    #[arg(long)]
    pub lambda: Option<usize>,
    /// Target λ/μ; μ becomes λ over the nearest divisor of λ.
    #[arg(long, default_value_t = 20.0)]
    pub mu_ratio: f64,
    /// Explicit parent count, overriding --mu-ratio.
    #[arg(long)]
    pub mu: Option<usize>,
    /// none, 1-point, 2-point, 3-point, uniform or half-uniform.
    #[arg(long, default_value = "none")]
    pub cross: String,
    /// Per-bit mutation rate (default: single-bit flips without crossover,
    /// 0.05 per bit with it).
    #[arg(long)]
    pub mut_rate: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_gen: usize,
    /// `exact` or `approx:<t>` (default: exact when n+k <= 20).
    #[arg(long)]
    pub fitness: Option<String>,
    /// Generations of the logical-generator search used by approx fitness.
    #[arg(long)]
    pub qdist_generations: Option<usize>,
    /// Random seed (default: drawn from entropy and recorded).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Result JSON path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-generation CSV trace path.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Stop once the best code has this distance; exit 2 if never reached.
    #[arg(long)]
    pub target_distance: Option<usize>,
    /// Stop once the best fitness is at most this value.
    #[arg(long)]
    pub target_fitness: Option<f64>,
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

impl SearchArgs {
    pub fn config(&self) -> CliResult<SearchConfig<f64>> {
        let model = parse_model(&self.model)?;
        let shape = self.shape.shape(&model)?;
        let seed = self.seed.unwrap_or_else(rand::random);
        let mut cfg = SearchConfig::new(shape, model, seed);
        let lambda = self.lambda.unwrap_or(cfg.lambda);
        if !(self.mu_ratio >= 1.0) {
            return Err(CliError::Usage("--mu-ratio must be at least 1".into()));
        }
        cfg = cfg.with_lambda_ratio(lambda, self.mu_ratio);
        if let Some(mu) = self.mu {
            cfg.mu = mu;
        }
        let cross: CrossType = self.cross.parse().map_err(usage)?;
        cfg = cfg.with_cross(cross);
        if let Some(rate) = self.mut_rate {
            if !(0.0..=1.0).contains(&rate) {
                return Err(CliError::Usage(format!("--mut-rate {rate} outside [0, 1]")));
            }
            cfg.mutation = MutationMode::PerBit { rate };
        }
        cfg.max_generations = self.max_gen;
        if let Some(f) = &self.fitness {
            cfg.fitness = f.parse::<FitnessMode>().map_err(usage)?;
        }
        if let Some(g) = self.qdist_generations {
            cfg.qdist.generations = g;
        }
        cfg.target_distance = self.target_distance;
        cfg.target_fitness = self.target_fitness;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn run(args: SearchArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    let cfg = args.config()?;
    let result = run_search(&cfg)?;
    let json = result.to_json();
    match &args.out {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => writeln!(out, "{json}").map_err(|e| CliError::Data(e.to_string()))?,
    }
    if let Some(path) = &args.trace {
        write_file(path, &result.trace.to_csv())?;
    }
    let distance = result
        .best_distance
        .map_or_else(|| "unknown".to_owned(), |d| d.to_string());
    let _ = writeln!(
        err,
        "best {} fitness {:e} distance {} found at generation {} of {} (seed {})",
        result.best.to_hex(),
        result.best_fitness,
        distance,
        result.generation_found,
        result.generations_run,
        result.seed
    );
    let missed = matches!(cfg.target_distance, Some(t) if result.best_distance.is_none_or(|d| d < t));
    if missed {
        return Ok(EXIT_TARGET_MISSED);
    }
    Ok(EXIT_OK)
}
