//! Command-line surface for the sumseq container.
//!
//! Subcommands: `sum`, `stats`, `select`, `validate`, `bench`. Input is
//! a text file with one numeric literal per line (`#` comments and blank
//! lines ignored); query output is one JSON record per line on stdout,
//! benchmark output is CSV. Commands are stateless: each invocation
//! parses the file and builds the sequence fresh.
//!
//! Exit codes are a stable contract: 0 success, 2 data-file parse
//! failure, 3 bounds or usage error, 4 arithmetic overflow, 5 validation
//! failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use sumseq::{Error, SumSequence, TreeConfig, Value};

const EXIT_PARSE: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_ARITHMETIC: u8 = 4;
const EXIT_VALIDATION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "sumseq",
    version,
    about = "Indexed sequence queries: rank access, range sums, range statistics",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TreeOpts {
    /// Maximum children per tree node (at least 3).
    #[arg(long, default_value_t = 8)]
    fanout: usize,

    /// Element type of the sequence.
    #[arg(long, value_enum, default_value_t = Mode::F64)]
    mode: Mode,

    /// Disable the sum-of-squares payload (statistics unavailable).
    #[arg(long)]
    no_squares: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    I64,
    F64,
}

#[derive(Subcommand)]
enum Command {
    /// Sum of the elements at ranks [FROM, TO).
    Sum {
        file: PathBuf,
        from: usize,
        to: usize,
        /// Use the prefix-walk algorithm (requires FROM = 0).
        #[arg(long)]
        prefix: bool,
        #[command(flatten)]
        tree: TreeOpts,
    },
    /// Count, sum, sum of squares, mean, variance, and standard
    /// deviation of the elements at ranks [FROM, TO).
    Stats {
        file: PathBuf,
        from: usize,
        to: usize,
        #[command(flatten)]
        tree: TreeOpts,
    },
    /// Value stored at the given rank.
    Select {
        file: PathBuf,
        rank: usize,
        #[command(flatten)]
        tree: TreeOpts,
    },
    /// Structural validation, optionally after a seeded mutation script.
    Validate {
        file: PathBuf,
        /// Apply this many seeded random insert/remove/set operations
        /// before validating.
        #[arg(long, default_value_t = 0)]
        mutations: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Damage one internal aggregate before validating (test hook).
        #[arg(long, hide = true)]
        corrupt: bool,
        #[command(flatten)]
        tree: TreeOpts,
    },
    /// Cost benchmark over seeded random sequences, as CSV.
    Bench {
        /// Strictly increasing sequence sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// Element span of range and stats queries.
        #[arg(long, default_value_t = 64)]
        distance: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        tree: TreeOpts,
    },
}

struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    fn new(exit: u8, message: impl Into<String>) -> Self {
        Failure {
            exit,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let exit = match err {
            Error::Overflow => EXIT_ARITHMETIC,
            Error::Domain(_) => EXIT_PARSE,
            _ => EXIT_USAGE,
        };
        Failure::new(exit, err.to_string())
    }
}

/// Element types the CLI can ingest and synthesize.
trait CliValue: Value {
    fn sample(rng: &mut ChaCha8Rng) -> Self;
}

impl CliValue for i64 {
    fn sample(rng: &mut ChaCha8Rng) -> i64 {
        rng.random_range(-1_000..1_000)
    }
}

impl CliValue for f64 {
    fn sample(rng: &mut ChaCha8Rng) -> f64 {
        rng.random_range(-1.0..1.0)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{err}");
                return ExitCode::SUCCESS;
            }
            eprint!("{err}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let mode = match &cli.command {
        Command::Sum { tree, .. }
        | Command::Stats { tree, .. }
        | Command::Select { tree, .. }
        | Command::Validate { tree, .. }
        | Command::Bench { tree, .. } => tree.mode,
    };

    let outcome = match mode {
        Mode::I64 => run::<i64>(&cli.command),
        Mode::F64 => run::<f64>(&cli.command),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("sumseq: {}", failure.message);
            ExitCode::from(failure.exit)
        }
    }
}

fn config(tree: &TreeOpts) -> Result<TreeConfig, Failure> {
    Ok(TreeConfig::new(tree.fanout)?.with_track_squares(!tree.no_squares))
}

fn load<V: CliValue>(path: &Path) -> Result<Vec<V>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| Failure::new(EXIT_USAGE, format!("{}: {err}", path.display())))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        match V::parse_token(token) {
            Some(v) => values.push(v),
            None => {
                return Err(Failure::new(
                    EXIT_PARSE,
                    format!("parse error at line {}: {token:?}", idx + 1),
                ))
            }
        }
    }
    Ok(values)
}

fn build_from_file<V: CliValue>(path: &Path, tree: &TreeOpts) -> Result<SumSequence<V>, Failure> {
    let values = load::<V>(path)?;
    Ok(SumSequence::build(&values, config(tree)?)?)
}

fn run<V: CliValue>(command: &Command) -> Result<(), Failure> {
    match command {
        Command::Sum {
            file,
            from,
            to,
            prefix,
            tree,
        } => cmd_sum::<V>(file, *from, *to, *prefix, tree),
        Command::Stats { file, from, to, tree } => cmd_stats::<V>(file, *from, *to, tree),
        Command::Select { file, rank, tree } => cmd_select::<V>(file, *rank, tree),
        Command::Validate {
            file,
            mutations,
            seed,
            corrupt,
            tree,
        } => cmd_validate::<V>(file, *mutations, *seed, *corrupt, tree),
        Command::Bench {
            sizes,
            trials,
            distance,
            seed,
            tree,
        } => cmd_bench::<V>(sizes, *trials, *distance, *seed, tree),
    }
}

fn cmd_sum<V: CliValue>(
    file: &Path,
    from: usize,
    to: usize,
    prefix: bool,
    tree: &TreeOpts,
) -> Result<(), Failure> {
    let seq = build_from_file::<V>(file, tree)?;
    let result = if prefix && from == 0 {
        seq.prefix_sum(to)?
    } else {
        seq.range_sum(from, to)?
    };
    println!(
        "{{\"sum\":{},\"from\":{from},\"to\":{to},\"nodes_visited\":{},\"additions\":{}}}",
        result.value, result.stats.nodes_visited, result.stats.additions
    );
    Ok(())
}

fn cmd_stats<V: CliValue>(
    file: &Path,
    from: usize,
    to: usize,
    tree: &TreeOpts,
) -> Result<(), Failure> {
    let seq = build_from_file::<V>(file, tree)?;
    let report = seq.stats_report(from, to)?;
    println!(
        "{{\"count\":{},\"sum\":{},\"sum_sq\":{},\"mean\":{},\"variance\":{},\"stddev\":{}}}",
        report.count, report.sum, report.sum_sq, report.mean, report.variance, report.stddev
    );
    Ok(())
}

fn cmd_select<V: CliValue>(file: &Path, rank: usize, tree: &TreeOpts) -> Result<(), Failure> {
    let seq = build_from_file::<V>(file, tree)?;
    let value = seq.value_at(rank)?;
    println!("{{\"rank\":{rank},\"value\":{value}}}");
    Ok(())
}

fn cmd_validate<V: CliValue>(
    file: &Path,
    mutations: u64,
    seed: u64,
    corrupt: bool,
    tree: &TreeOpts,
) -> Result<(), Failure> {
    let mut seq = build_from_file::<V>(file, tree)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..mutations {
        let len = seq.len();
        match rng.random_range(0..10u32) {
            0..=4 => {
                let rank = rng.random_range(0..=len);
                seq.insert(rank, V::sample(&mut rng))?;
            }
            5..=7 if len > 0 => {
                seq.remove(rng.random_range(0..len))?;
            }
            _ if len > 0 => {
                seq.set_value(rng.random_range(0..len), V::sample(&mut rng))?;
            }
            _ => {}
        }
    }
    if corrupt {
        seq.corrupt_internal_sum_for_tests();
    }
    let report = seq.validate();
    println!(
        "{{\"ok\":{},\"size\":{},\"levels\":{},\"violations\":{}}}",
        report.ok,
        seq.len(),
        seq.level_count(),
        report.violations.len()
    );
    if report.ok {
        Ok(())
    } else {
        for violation in &report.violations {
            eprintln!("violation: {violation}");
        }
        Err(Failure::new(
            EXIT_VALIDATION,
            format!("{} violation(s) found", report.violations.len()),
        ))
    }
}

fn mean(total: u64, trials: u32) -> f64 {
    total as f64 / trials.max(1) as f64
}

fn cmd_bench<V: CliValue>(
    sizes: &[usize],
    trials: u32,
    distance: usize,
    seed: u64,
    tree: &TreeOpts,
) -> Result<(), Failure> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Failure::new(EXIT_USAGE, "sizes must be nonzero"));
    }
    if sizes.windows(2).any(|pair| pair[1] <= pair[0]) {
        return Err(Failure::new(EXIT_USAGE, "sizes must be strictly increasing"));
    }
    if distance == 0 || distance > sizes[0] {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("distance {distance} must be in 1..={}", sizes[0]),
        ));
    }

    println!("size,query_kind,trials,mean_nodes_visited,mean_additions,naive_ops");
    for &size in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(size as u64));
        let values: Vec<V> = (0..size).map(|_| V::sample(&mut rng)).collect();
        let seq = SumSequence::build(&values, config(tree)?)?;

        let (mut visits, mut adds) = (0u64, 0u64);
        for _ in 0..trials {
            let n = rng.random_range(1..=size);
            let r = seq.prefix_sum(n)?;
            visits += r.stats.nodes_visited;
            adds += r.stats.additions;
        }
        print_row(size, "prefix", trials, visits, adds, size);

        let (mut visits, mut adds) = (0u64, 0u64);
        for _ in 0..trials {
            let m = rng.random_range(0..=size - distance);
            let a = seq.select(m)?;
            let b = seq.select(m + distance - 1)?;
            let r = seq.range_sum_between(a, b)?;
            visits += r.stats.nodes_visited;
            adds += r.stats.additions;
        }
        print_row(size, "range_fixed_d", trials, visits, adds, distance);

        let (mut visits, mut adds) = (0u64, 0u64);
        for _ in 0..trials {
            let m = rng.random_range(0..=size - distance);
            let r = seq.stats_report(m, m + distance)?;
            visits += r.stats.nodes_visited;
            adds += r.stats.additions;
        }
        print_row(size, "stats", trials, visits, adds, distance);
    }
    Ok(())
}

fn print_row(size: usize, kind: &str, trials: u32, visits: u64, adds: u64, naive_ops: usize) {
    println!(
        "{size},{kind},{trials},{:.4},{:.4},{naive_ops}",
        mean(visits, trials),
        mean(adds, trials)
    );
}
