//! Command-line front end.

use crate::error::{Error, Result};
use crate::harness::{generate_random_instance, multi_start, Algo, Budget};
use crate::io::{load_instance, load_solution, parse_bqp, serialize_instance, serialize_solution};
use crate::landscape::{sample_landscape, write_landscape_csv, DEFAULT_SAMPLES};
use crate::model::{bits_to_string, brute_force_opt, reduce_bqp, reduction_guard};
use crate::tabu::TabuParams;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bbqp", version, about = "Bipartite boolean quadratic programming solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multi-start heuristic search
    Solve(SolveArgs),
    /// Exhaustive optimum for m + n <= 30
    Exact(ExactArgs),
    /// Write a uniformly random instance
    Generate(GenerateArgs),
    /// Turn a BQP file into an equivalent BBQP instance
    ReduceBqp(ReduceArgs),
    /// Sample tabu local optima and write a distance/gap CSV
    Landscape(LandscapeArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "hybrid", value_parser = parse_algo)]
    pub algo: Algo,
    /// Wall-clock budget in seconds
    #[arg(long)]
    pub time_limit: Option<f64>,
    /// Number of restarts
    #[arg(long)]
    pub restarts: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stagnation limit of tabu search [default: 10 * (m + n)]
    #[arg(long)]
    pub tabu_depth: Option<u64>,
    /// Write the best solution here
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print a single tab-separated record instead of the text block
    #[arg(long)]
    pub tsv: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// BQP file (`BQP 1`, `n`, linear terms, `n` rows)
    #[arg(long)]
    pub instance: PathBuf,
    /// Penalty constant [default: smallest admissible value]
    #[arg(long = "M")]
    pub big_m: Option<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LandscapeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tabu_depth: Option<u64>,
    /// Solution file to measure against [default: best sample]
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_algo(s: &str) -> std::result::Result<Algo, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn tabu_params(depth: Option<u64>) -> TabuParams {
    TabuParams {
        tabu_depth: depth,
        ..TabuParams::default()
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let budget = Budget {
        wall_seconds: args.time_limit,
        max_restarts: args.restarts,
    };
    let report = multi_start(
        &inst,
        args.algo,
        &tabu_params(args.tabu_depth),
        &budget,
        args.seed,
        args.jobs,
    )?;
    if let Some(path) = &args.out {
        std::fs::write(path, serialize_solution(&report.best_solution))?;
    }
    if args.tsv {
        writeln!(stdout, "{}", report.to_tsv())?;
    } else {
        write!(stdout, "{}", report.to_block())?;
    }
    Ok(())
}

fn exact(args: &ExactArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let (sol, value) = brute_force_opt(&inst)?;
    if let Some(path) = &args.out {
        std::fs::write(path, serialize_solution(&sol))?;
    }
    writeln!(stdout, "{value}")?;
    writeln!(stdout, "{}", bits_to_string(&sol.x))?;
    writeln!(stdout, "{}", bits_to_string(&sol.y))?;
    Ok(())
}

fn generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = generate_random_instance(args.rows, args.cols, args.lo, args.hi, args.seed)?;
    emit(args.out.as_deref(), &serialize_instance(&inst), stdout)
}

fn reduce(args: &ReduceArgs, stdout: &mut dyn Write) -> Result<()> {
    let bqp = parse_bqp(&std::fs::read_to_string(&args.instance)?)?;
    let big_m = args.big_m.unwrap_or_else(|| reduction_guard(&bqp.q, &bqp.c));
    let inst = reduce_bqp(&bqp.q, &bqp.c, big_m)?;
    emit(args.out.as_deref(), &serialize_instance(&inst), stdout)
}

fn landscape(args: &LandscapeArgs, stdout: &mut dyn Write) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let reference = args.reference.as_deref().map(load_solution).transpose()?;
    let samples = sample_landscape(
        &inst,
        args.samples,
        &tabu_params(args.tabu_depth),
        reference.as_ref(),
        args.seed,
    )?;
    match &args.out {
        Some(path) => write_landscape_csv(&samples, std::fs::File::create(path)?),
        None => write_landscape_csv(&samples, stdout),
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::TooLarge(_) => EXIT_TOO_LARGE,
        _ => EXIT_INPUT,
    }
}

/// Runs a parsed command, printing diagnostics to `stderr`; returns the exit code.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Solve(a) => solve(a, stdout),
        Command::Exact(a) => exact(a, stdout),
        Command::Generate(a) => generate(a, stdout),
        Command::ReduceBqp(a) => reduce(a, stdout),
        Command::Landscape(a) => landscape(a, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            exit_code(&err)
        }
    }
}
