use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

use commands::CliError;

/// Berge paths and thetas in uniform hypergraphs.
#[derive(Debug, Parser)]
#[command(name = "berge", version)]
struct Cli {
    /// Worker threads for construction and census (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Seed for every random choice a command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Search node budget per query.
    #[arg(long, global = true, env = "BERGE_NODE_BUDGET")]
    node_budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a random polynomial hypergraph, then census and repair it.
    Generate(GenerateArgs),
    /// Look for a Berge theta.
    Detect(DetectArgs),
    /// Reduce to an m-uniform multigraph.
    Reduce(ReduceArgs),
    /// Count Berge paths between vertex pairs.
    Census(CensusArgs),
    /// Delete edges until every pair has at most `threshold` paths.
    Repair(RepairArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(short)]
    k: usize,
    #[arg(short)]
    r: usize,
    /// Field size, a prime.
    #[arg(short)]
    q: u64,
    /// Degree bound (default k(2k+1)).
    #[arg(short)]
    d: Option<u32>,
    /// Hypergraph output file.
    #[arg(long, short)]
    out: PathBuf,
    /// JSON statistics output file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Write the repaired hypergraph here.
    #[arg(long)]
    repaired: Option<PathBuf>,
    /// Dump the defining polynomials here, one after another.
    #[arg(long)]
    polys: Option<PathBuf>,
    /// Bad-pair threshold (default: the pilot value for (k, r) if known).
    #[arg(long)]
    threshold: Option<u64>,
    /// Pairs sampled when the graph is too large for a full census.
    #[arg(long, default_value_t = 100_000)]
    sample: usize,
    /// Leave wall-clock timings out of the statistics.
    #[arg(long)]
    no_timings: bool,
    /// Limit on q^(kr), the number of candidate tuples.
    #[arg(long, env = "BERGE_TUPLE_BUDGET")]
    tuple_budget: Option<u64>,
}

#[derive(Debug, Args)]
struct DetectArgs {
    input: PathBuf,
    #[arg(short)]
    k: usize,
    #[arg(short)]
    t: usize,
    /// Cross-check against the brute-force oracle (small inputs only).
    #[arg(long)]
    oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    Lex,
    Random,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(short)]
    m: usize,
    /// Reduced graph output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// With -t, also print the multiplicity bound for theta-free inputs.
    #[arg(short)]
    k: Option<usize>,
    #[arg(short)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value_t = TieBreakArg::Lex)]
    tie_break: TieBreakArg,
}

#[derive(Debug, Args)]
struct CensusArgs {
    input: PathBuf,
    #[arg(short)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    cap: u64,
    /// Sample this many pairs instead of taking all of them.
    #[arg(long, conflicts_with = "cross_part")]
    sample: Option<usize>,
    /// Only pairs in different parts.
    #[arg(long)]
    cross_part: bool,
    /// JSON output file (default: stdout).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RepairArgs {
    input: PathBuf,
    #[arg(short)]
    k: usize,
    /// Default: the pilot value for (k, r) if known.
    #[arg(long)]
    threshold: Option<u64>,
    #[arg(long, short)]
    out: PathBuf,
    /// JSON deletion log.
    #[arg(long)]
    log: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = commands::Context {
        seed: cli.seed,
        node_budget: cli.node_budget,
    };
    match cli.command {
        Command::Generate(a) => commands::generate(&ctx, a),
        Command::Detect(a) => commands::detect(&ctx, a),
        Command::Reduce(a) => commands::reduce(&ctx, a),
        Command::Census(a) => commands::census(&ctx, a),
        Command::Repair(a) => commands::repair(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(1);
        }
        pool = pool.num_threads(w);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
