use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use stabevo::evolve::{default_shape, run_search, SearchConfig};
use stabevo::genome::DISTANCE_ENUMERATION_CAP;

use crate::{io_err, parse_model, write_file, CliError, CliResult, EXIT_OK};

/// Best-known distances keyed by `(n, k)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BenchTable {
    pub rows: BTreeMap<(usize, usize), usize>,
}

impl BenchTable {
    /// Reads `n,k,d` lines. A header or any other line whose first field is
    /// not a number is skipped.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut rows = BTreeMap::new();
        for (i, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| CliError::Data(format!("table: {e}")))?;
            if rec.iter().all(str::is_empty) || rec[0].parse::<usize>().is_err() {
                continue;
            }
            let field = |j: usize| -> CliResult<usize> {
                rec.get(j)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| CliError::Data(format!("table line {}: expected n,k,d", i + 1)))
            };
            let (n, k, d) = (field(0)?, field(1)?, field(2)?);
            if k == 0 || k >= n || d == 0 {
                return Err(CliError::Data(format!("table line {}: invalid entry n={n} k={k} d={d}", i + 1)));
            }
            rows.insert((n, k), d);
        }
        Ok(BenchTable { rows })
    }

    pub fn get(&self, n: usize, k: usize) -> Option<usize> {
        self.rows.get(&(n, k)).copied()
    }
}

/// One line of the bench CSV.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub k: usize,
    pub run: usize,
    pub found_distance: Option<usize>,
    pub best_known: usize,
    pub delta: Option<i64>,
    pub generations_used: usize,
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    /// CSV of `n,k,best_known_distance`.
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long)]
    pub n_max: usize,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_gen: usize,
    /// Run `i` of every cell uses seed `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "depolarising:0.01")]
    pub model: String,
    /// Output CSV path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn bench_rows(args: &BenchArgs, table: &BenchTable, err: &mut (dyn Write + Send)) -> CliResult<Vec<BenchRow>> {
    let model = parse_model(&args.model)?;
    let mut rows = Vec::new();
    for n in 2..=args.n_max {
        let k_top = args.k_max.unwrap_or(n - 1).min(n - 1);
        for k in 1..=k_top {
            let Some(best_known) = table.get(n, k) else {
                let _ = writeln!(err, "warning: no best-known distance for n={n} k={k}; skipped");
                continue;
            };
            let shape = default_shape(n, k, &model)?;
            for run in 0..args.runs {
                let seed = args.seed.wrapping_add(run as u64);
                let mut cfg = SearchConfig::new(shape, model, seed);
                cfg.max_generations = args.max_gen;
                if n + k <= DISTANCE_ENUMERATION_CAP {
                    cfg.target_distance = Some(best_known);
                }
                cfg.validate()?;
                let result = run_search(&cfg)?;
                rows.push(BenchRow {
                    n,
                    k,
                    run,
                    found_distance: result.best_distance,
                    best_known,
                    delta: result.best_distance.map(|d| best_known as i64 - d as i64),
                    generations_used: result.generations_run,
                    seed,
                });
            }
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["n", "k", "run", "found_distance", "best_known", "delta", "generations_used", "seed"])
        .expect("in-memory write");
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn run(args: BenchArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    let text = std::fs::read_to_string(&args.table).map_err(|e| io_err(&args.table, e))?;
    let table = BenchTable::parse(&text)?;
    let rows = bench_rows(&args, &table, err)?;
    let csv = if rows.is_empty() { String::new() } else { to_csv(&rows) };
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes()).map_err(|e| CliError::Data(e.to_string()))?,
    }
    if !rows.is_empty() {
        let hits = rows.iter().filter(|r| r.delta.is_some_and(|d| d <= 0)).count();
        let _ = writeln!(
            err,
            "success rate {hits}/{} ({:.1}%)",
            rows.len(),
            100.0 * hits as f64 / rows.len() as f64
        );
    }
    Ok(EXIT_OK)
}
