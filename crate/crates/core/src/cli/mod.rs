//! The `approxcount` command line: `count`, `verify`, `gen` and `bench`.
//!
//! Instances are JSON objects, one per line, tagged by `"problem"`. Results
//! are JSON lines, benchmarks are CSV. Exit codes: 0 success, 1 a
//! verification found a violation, 2 usage or input error, 3 a work cap was
//! exceeded.

mod bench;
mod gen;
mod io;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use bench::{bench_rows, write_csv, BenchRow, BenchSpec};
pub use gen::{generate, rng_for, GenParams};
pub use io::{
    count_record, exact_count, read_instances, run_mode, Counted, Epsilon, Instance, Mode, Problem,
    ResultRecord,
};
pub use verify::{verify, ModeSummary, Source, VerifySummary, Violation};

use crate::error::Error;
use crate::oracles::Limits;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("write failed: {0}")]
    Output(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::TooLarge { .. }) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "approxcount",
    version,
    about = "Exact and approximate counting for m-tuples, 0/1 knapsack and two-row contingency tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count every instance of a file and print one JSON result per line.
    Count {
        /// Instance file (JSON lines); `-` reads standard input.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Required for the approximate modes; decimal or `a/b`.
        #[arg(long)]
        epsilon: Option<String>,
        /// Also run the exact DP and report the ratio.
        #[arg(long)]
        with_exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Check exact <= approx <= (1 + eps) * exact on a file or random instances.
    Verify {
        #[arg(long, conflicts_with = "problem")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, required_unless_present = "input")]
        problem: Option<Problem>,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sizes: SizeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Print seeded random instances as JSON lines.
    Gen {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of instances.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[command(flatten)]
        sizes: SizeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a magnitude sweep and print CSV rows.
    Bench {
        #[arg(long, value_enum)]
        problem: Problem,
        /// Comma-separated list; empty runs the exact mode only.
        #[arg(long, default_value = "0.25")]
        epsilon: String,
        /// Comma-separated powers of ten applied to every input number.
        #[arg(long, default_value = "0,3,6")]
        scales: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sizes: SizeArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SizeArgs {
    /// Items (knapsack) or columns (contingency2).
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Number of sets (mtuples).
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 20)]
    pub wmax: i64,
    /// Capacity bound; defaults to the total weight.
    #[arg(long)]
    pub cmax: Option<i64>,
    #[arg(long, default_value_t = 4)]
    pub setmax: usize,
    #[arg(long, default_value_t = 30)]
    pub valmax: i64,
    #[arg(long, default_value_t = 5)]
    pub cellmax: i64,
}

impl From<&SizeArgs> for GenParams {
    fn from(a: &SizeArgs) -> Self {
        GenParams {
            n: a.n,
            m: a.m,
            wmax: a.wmax,
            cmax: a.cmax,
            setmax: a.setmax,
            valmax: a.valmax,
            cellmax: a.cellmax,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LimitArgs {
    /// Cap on brute-force candidates.
    #[arg(long, default_value_t = Limits::default().enumeration)]
    pub enum_cap: u128,
    /// Cap on exact DP cell updates.
    #[arg(long, default_value_t = Limits::default().dp_work)]
    pub dp_cap: u128,
}

impl From<&LimitArgs> for Limits {
    fn from(a: &LimitArgs) -> Self {
        Limits {
            enumeration: a.enum_cap,
            dp_work: a.dp_cap,
        }
    }
}

fn parse_list<T>(
    text: &str,
    item: impl Fn(&str) -> Result<T, CliError>,
) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

fn write_json_lines<T: serde::Serialize>(
    out: &mut dyn Write,
    items: impl IntoIterator<Item = T>,
) -> Result<(), CliError> {
    for item in items {
        serde_json::to_writer(&mut *out, &item).map_err(|e| CliError::Output(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Runs a parsed command; `Ok(false)` means a verification failed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Count {
            input,
            mode,
            epsilon,
            with_exact,
            out,
            limits,
        } => {
            let eps = epsilon.as_deref().map(Epsilon::parse).transpose()?;
            if !mode.is_exact() && eps.is_none() {
                return Err(CliError::Usage(format!(
                    "--epsilon is required for mode {}",
                    mode.name()
                )));
            }
            let limits = Limits::from(&limits);
            let records = read_instances(&input)?
                .iter()
                .map(|inst| count_record(inst, mode, eps.as_ref(), with_exact, &limits))
                .collect::<Result<Vec<_>, _>>()?;
            write_json_lines(&mut *io_out(out)?, records)?;
            Ok(true)
        }
        Command::Verify {
            input,
            problem,
            epsilon,
            trials,
            seed,
            sizes,
            out,
            limits,
        } => {
            let eps = Epsilon::parse(&epsilon)?;
            let source = match (input, problem) {
                (Some(path), _) => Source::File(read_instances(&path)?),
                (None, Some(problem)) => Source::Random {
                    problem,
                    bounds: GenParams::from(&sizes),
                    seed,
                    trials,
                },
                (None, None) => return Err(CliError::Usage("give --input or --problem".into())),
            };
            let summary = verify(source, &eps, &Limits::from(&limits))?;
            for v in &summary.violations {
                eprintln!(
                    "violation: trial {} seed {seed} mode {}: exact {} approx {} instance {}",
                    v.trial,
                    v.mode.name(),
                    v.exact,
                    v.approx,
                    v.instance.to_json()
                );
            }
            let clean = summary.violations.is_empty();
            write_json_lines(&mut *io_out(out)?, [summary])?;
            Ok(clean)
        }
        Command::Gen {
            problem,
            seed,
            trials,
            sizes,
            out,
        } => {
            let params = GenParams::from(&sizes);
            let instances = (0..trials).map(|t| generate(problem, &params, &mut rng_for(seed, t)));
            write_json_lines(&mut *io_out(out)?, instances)?;
            Ok(true)
        }
        Command::Bench {
            problem,
            epsilon,
            scales,
            seed,
            sizes,
            out,
            limits,
        } => {
            let spec = BenchSpec {
                problem,
                params: GenParams::from(&sizes),
                seed,
                scales: parse_list(&scales, |s| {
                    s.parse()
                        .map_err(|_| CliError::Usage(format!("bad scale {s:?}")))
                })?,
                epsilons: parse_list(&epsilon, Epsilon::parse)?,
            };
            let rows = bench_rows(&spec, &Limits::from(&limits))?;
            write_csv(&rows, io_out(out)?)?;
            Ok(true)
        }
    }
}

fn io_out(path: Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    io::open_output(path.as_deref())
}

/// Parses the process arguments, runs, reports errors on stderr.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("approxcount: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
