//! Command-line interface for the stabevo code search.
//!
//! [`run`] parses arguments, executes one command and returns the process
//! exit status:
//!
//! | code | meaning                                   |
//! |------|-------------------------------------------|
//! | 0    | success                                   |
//! | 2    | a `--target-distance` was not reached     |
//! | 64   | usage error (bad flags or configuration)  |
//! | 65   | data error (unreadable or invalid input)  |

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod bench;
mod config;
mod eval;
mod example;
mod profile;
mod search;

pub use bench::{BenchRow, BenchTable};
pub use config::expand_config;
pub use example::five_qubit_walkthrough;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TARGET_MISSED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

/// Library errors from user-supplied configuration are usage errors;
/// everything about input data is a data error.
impl From<stabevo::Error> for CliError {
    fn from(e: stabevo::Error) -> Self {
        use stabevo::Error as E;
        match e {
            E::InvalidArgument(_) | E::ResourceLimit(_) => CliError::Usage(e.to_string()),
            E::Parse(_) | E::InvalidInput(_) | E::NonCommuting { .. } => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| io_err(path, e))
}

#[derive(Parser, Debug)]
#[command(name = "stabevo", version, about = "Evolutionary search for stabiliser codes")]
pub struct Cli {
    /// Worker threads for fitness evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// File of `key=value` lines supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Search for a code with minimal undetectable error rate.
    Search(search::SearchArgs),
    /// Evaluate a code given as a file or a genotype.
    Eval(eval::EvalArgs),
    /// Compare search results with a table of best-known distances.
    Bench(bench::BenchArgs),
    /// Print a worked example.
    Example(example::ExampleArgs),
    /// Hamming distance versus fitness difference along a random walk.
    Profile(profile::ProfileArgs),
}

/// Shape flags shared by commands that build genotypes.
#[derive(Args, Debug, Clone)]
pub struct ShapeArgs {
    /// Physical qubits.
    #[arg(long)]
    pub n: usize,
    /// Logical qubits.
    #[arg(long)]
    pub k: usize,
    /// Independent X-containing checks (default n-k, or (n-k)/2 with --css).
    #[arg(long)]
    pub r: Option<usize>,
    /// Restrict to CSS codes.
    #[arg(long)]
    pub css: bool,
    /// Include the diagonal of M (default: only for non-depolarising models).
    #[arg(long)]
    pub m_diagonal: Option<bool>,
}

impl ShapeArgs {
    pub fn shape(&self, model: &stabevo::ErrorModel64) -> CliResult<stabevo::CodeShape> {
        use stabevo::CodeShape;
        if self.k == 0 || self.k >= self.n {
            return Err(CliError::Usage(format!("need 1 <= k < n, got n={} k={}", self.n, self.k)));
        }
        let shape = if self.css {
            match self.r {
                Some(r) => CodeShape::css(self.n, self.k, r)?,
                None => CodeShape::css_default(self.n, self.k)?,
            }
        } else {
            let r = self.r.unwrap_or(self.n - self.k);
            let diag = self.m_diagonal.unwrap_or(!model.is_depolarising());
            CodeShape::new(self.n, self.k, r)?.with_m_diagonal(diag)
        };
        Ok(shape)
    }
}

pub(crate) fn parse_model(s: &str) -> CliResult<stabevo::ErrorModel64> {
    s.parse().map_err(|e: stabevo::Error| CliError::Usage(e.to_string()))
}

fn dispatch(cli: Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> CliResult<i32> {
    match cli.command {
        Command::Search(a) => search::run(a, out, err),
        Command::Eval(a) => eval::run(a, out),
        Command::Bench(a) => bench::run(a, out, err),
        Command::Example(a) => example::run(a, out),
        Command::Profile(a) => profile::run(a, out, err),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status. Normal output goes to `out`, diagnostics to `err`.
pub fn run<I, S>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.code();
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli, out, err)),
            Err(e) => Err(CliError::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => dispatch(cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}
