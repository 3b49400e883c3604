use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use stabevo::evolve::{hamming_fitness_profile, mean_by_distance};
use stabevo::rng::{stream, Purpose};

use crate::{parse_model, write_file, CliError, CliResult, ShapeArgs, EXIT_OK};

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub shape: ShapeArgs,
    #[arg(long, default_value = "depolarising:0.01")]
    pub model: String,
    /// Codes on the walk; every pair is recorded.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pairwise CSV path (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: ProfileArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    let model = parse_model(&args.model)?;
    let shape = args.shape.shape(&model)?;
    let mut rng = stream(args.seed, 0, 0, Purpose::Profile);
    let records = hamming_fitness_profile(shape, &model, args.samples, &mut rng)?;
    let mut csv = String::from("hamming_distance,delta\n");
    for r in &records {
        csv.push_str(&format!("{},{:e}\n", r.distance, r.delta));
    }
    match &args.out {
        Some(path) => write_file(path, &csv)?,
        None => out.write_all(csv.as_bytes()).map_err(|e| CliError::Data(e.to_string()))?,
    }
    let _ = writeln!(err, "hamming_distance mean_delta pairs");
    for (d, mean, count) in mean_by_distance(&records) {
        let _ = writeln!(err, "{d} {mean:e} {count}");
    }
    Ok(EXIT_OK)
}
