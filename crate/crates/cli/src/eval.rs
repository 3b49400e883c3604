use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use stabevo::fitness::{
    max_depth, qdistevol_generators, uer_approx_generators, uer_exact_generators, FitnessMode,
    QDistEvolParams,
};
use stabevo::genome::{enumerate_nontrivial, DISTANCE_ENUMERATION_CAP};
use stabevo::io::CodeFile;
use stabevo::CodeGenotype;

use crate::{io_err, write_file, parse_model, CliError, CliResult, ShapeArgs, EXIT_OK};

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// Code file: header `n k r s css`, then rows of S, L and R.
    #[arg(long, conflicts_with = "genotype", required_unless_present = "genotype")]
    pub code: Option<PathBuf>,
    /// Genotype as `<bits>:<hex>`; needs --n and --k.
    #[arg(long, requires_all = ["n", "k"])]
    pub genotype: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub css: bool,
    #[arg(long)]
    pub m_diagonal: Option<bool>,
    #[arg(long, default_value = "depolarising:0.01")]
    pub model: String,
    /// `exact` or `approx:<t>` (default: exact when n+k <= 20).
    #[arg(long)]
    pub fitness: Option<String>,
    /// Also report the distance (exact when n+k <= 26, else an upper bound).
    #[arg(long)]
    pub distance: bool,
    /// Seed for the generator search used by approximate fitness.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the evaluated code to this path in code-file format.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

fn load(args: &EvalArgs, model: &stabevo::ErrorModel64) -> CliResult<CodeFile> {
    if let Some(path) = &args.code {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let file = CodeFile::parse(&text)?;
        if file.k < file.n {
            // full invariant check for proper codes
            file.to_code()?;
        } else if file.logicals.symplectic_gram(&file.logicals)?.is_zero() {
            return Err(CliError::Data("logical operators do not pair up".into()));
        }
        return Ok(file);
    }
    let hex = args.genotype.as_deref().expect("clap requires --code or --genotype");
    let shape_args = ShapeArgs {
        n: args.n.expect("clap requires --n"),
        k: args.k.expect("clap requires --k"),
        r: args.r,
        css: args.css,
        m_diagonal: args.m_diagonal,
    };
    let shape = shape_args.shape(model)?;
    let g = CodeGenotype::from_hex(shape, hex)?;
    Ok(CodeFile::from_code(&g.to_code()))
}

pub fn run(args: EvalArgs, out: &mut (dyn Write + Send)) -> CliResult<i32> {
    let model = parse_model(&args.model)?;
    let file = load(&args, &model)?;
    if let Some(path) = &args.export {
        write_file(path, &file.to_text())?;
    }
    let (n, k) = (file.n, file.k);
    let mode = match &args.fitness {
        Some(f) => f.parse::<FitnessMode>().map_err(|e| CliError::Usage(e.to_string()))?,
        None => FitnessMode::default_for(n, k),
    };
    let params = QDistEvolParams::default().with_seed(args.seed);
    let (s, l) = (&file.stabilisers, &file.logicals);
    let report = match mode {
        FitnessMode::Exact => uer_exact_generators(s, l, &model, usize::MAX)?,
        FitnessMode::Approximate { t } => {
            if t > max_depth(n, k) {
                return Err(CliError::Usage(format!("approx depth {t} exceeds {}", max_depth(n, k))));
            }
            uer_approx_generators(s, l, &model, t, &params)?
        }
    };
    let w = |e: std::io::Error| CliError::Data(e.to_string());
    writeln!(out, "n {n}").map_err(w)?;
    writeln!(out, "k {k}").map_err(w)?;
    writeln!(out, "model {model}").map_err(w)?;
    writeln!(out, "P_S {:e}", report.value).map_err(w)?;
    writeln!(out, "mode {mode}").map_err(w)?;
    writeln!(out, "terms {}", report.cost.terms).map_err(w)?;
    if args.distance {
        if n + k <= DISTANCE_ENUMERATION_CAP {
            let d = enumerate_nontrivial(s, l)?.min_weight().unwrap_or(0);
            writeln!(out, "distance {d}").map_err(w)?;
        } else {
            let bound = qdistevol_generators(s, l, &model, &params)?.min_weight;
            writeln!(out, "distance_upper_bound {bound}").map_err(w)?;
        }
    }
    Ok(EXIT_OK)
}
