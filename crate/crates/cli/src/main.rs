use binfuse::FilterKind;
use binfuse_cli::config::{BenchConfig, Bits, KeyMode};
use binfuse_cli::dataset::{generate_keys, generate_query_set};
use binfuse_cli::measure::{build_filter, measure_fpp, time_construction, time_queries};
use binfuse_cli::report::{BenchReport, emit_report};
use binfuse_cli::theory::{SpaceModel, theoretical_space};
use clap::{Args, Parser, Subcommand};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Membership filter benchmarks: binary fuse filters against xor and Bloom
/// baselines.
#[derive(Parser)]
#[command(name = "binfuse", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a filter from a generated key set and serialize it to a file.
    Build(BuildArgs),
    /// Load a filter file and probe keys read from standard input.
    Query(QueryArgs),
    /// Measure construction, queries, and FPP across a sweep; emit CSV.
    Bench(BenchArgs),
    /// Measure the false-positive probability of one configuration.
    Fpp(FppArgs),
    /// Print the theoretical bits-per-key table.
    ReportTheory(TheoryArgs),
}

#[derive(Args)]
struct FilterArgs {
    /// Filter kind: fuse3, fuse4, xor, or bloom.
    #[arg(long, value_parser = parse_kind, default_value = "fuse3")]
    filter: FilterKind,
    /// Fingerprint bits for fuse and xor filters (8 or 16).
    #[arg(long)]
    bits: Option<u32>,
    /// Bit budget per key for Bloom filters.
    #[arg(long, conflicts_with = "bits")]
    bits_per_key: Option<f64>,
}

#[derive(Args)]
struct DatasetArgs {
    /// Number of keys in the set.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Key generation mode: random or sequential.
    #[arg(long, value_parser = parse_key_mode, default_value = "random")]
    key_mode: KeyMode,
    /// Seed for every derived random stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Output path for the serialized filter.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct QueryArgs {
    /// Serialized filter to load.
    file: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Filter kinds to sweep; defaults to all four.
    #[arg(long = "filter", value_parser = parse_kind)]
    filters: Vec<FilterKind>,
    /// Set sizes to sweep; defaults to 10^4, 10^5, 10^6.
    #[arg(long = "n")]
    sizes: Vec<usize>,
    /// Fingerprint bits for the fuse and xor cells (8 or 16).
    #[arg(long, default_value_t = 8)]
    bits: u32,
    /// Bit budget per key for the Bloom cells.
    #[arg(long, default_value_t = 12.0)]
    bits_per_key: f64,
    /// Queries per cell.
    #[arg(long, default_value_t = 10_000_000)]
    queries: usize,
    /// Fraction of queries drawn from the key set.
    #[arg(long, default_value_t = 0.25)]
    in_set_fraction: f64,
    /// Timing repetitions per cell; must be odd.
    #[arg(long, default_value_t = 3)]
    reps: u32,
    #[arg(long, value_parser = parse_key_mode, default_value = "random")]
    key_mode: KeyMode,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FppArgs {
    #[command(flatten)]
    filter: FilterArgs,
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Non-member probes; at least 10^6 for a stable estimate.
    #[arg(long, default_value_t = 10_000_000)]
    queries: usize,
}

#[derive(Args)]
struct TheoryArgs {
    /// Single -log2(epsilon) row instead of the default 4..=16 sweep.
    #[arg(long)]
    epsilon_bits: Option<u32>,
}

fn parse_kind(s: &str) -> Result<FilterKind, String> {
    s.parse()
}

fn parse_key_mode(s: &str) -> Result<KeyMode, String> {
    s.parse()
}

/// Failure carrying the process exit code: 1 construction, 2 usage, 3 I/O.
struct Failure {
    code: u8,
    message: String,
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn construction_error(err: binfuse::Error) -> Failure {
    Failure {
        code: 1,
        message: err.to_string(),
    }
}

fn io_error(path: &Path, err: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {err}", path.display()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Build(args) => run_build(args),
        Command::Query(args) => run_query(args),
        Command::Bench(args) => run_bench(args),
        Command::Fpp(args) => run_fpp(args),
        Command::ReportTheory(args) => run_theory(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn resolve_bits(kind: FilterKind, bits: Option<u32>, bits_per_key: Option<f64>) -> Bits {
    match (bits, bits_per_key) {
        (Some(b), None) => Bits::Fingerprint(b),
        (None, Some(b)) => Bits::PerKey(b),
        (None, None) if kind == FilterKind::Bloom => Bits::PerKey(12.0),
        (None, None) => Bits::Fingerprint(8),
        (Some(_), Some(_)) => unreachable!("flags declared mutually exclusive"),
    }
}

/// A config for subcommands that only build: the query fields are unused but
/// must still validate.
fn single_config(filter: &FilterArgs, dataset: &DatasetArgs) -> Result<BenchConfig, Failure> {
    let config = BenchConfig {
        kind: filter.filter,
        n: dataset.n,
        bits: resolve_bits(filter.filter, filter.bits, filter.bits_per_key),
        query_set_size: 1,
        in_set_fraction: 0.0,
        repetitions: 1,
        key_mode: dataset.key_mode,
        rng_seed: dataset.seed,
    };
    config.validate().map_err(usage_error)?;
    Ok(config)
}

fn run_build(args: BuildArgs) -> Result<(), Failure> {
    let config = single_config(&args.filter, &args.dataset)?;
    let keys = generate_keys(config.n, config.key_mode, config.stream_seeds().keys);
    let built = build_filter(&config, &keys).map_err(construction_error)?;
    let bytes = binfuse::serialize(&built.filter);
    std::fs::write(&args.out, &bytes).map_err(|e| io_error(&args.out, e))?;
    println!(
        "wrote {}: {} n={} {} bytes (attempts {})",
        args.out.display(),
        built.filter.kind().name(),
        config.n,
        bytes.len(),
        built.attempts
    );
    Ok(())
}

fn run_query(args: QueryArgs) -> Result<(), Failure> {
    let bytes = std::fs::read(&args.file).map_err(|e| io_error(&args.file, e))?;
    let filter = binfuse::deserialize(&bytes).map_err(|e| io_error(&args.file, e))?;
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for line in stdin.lock().lines() {
        let line = line.map_err(|e| io_error(Path::new("stdin"), e))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let key: u64 = text
            .parse()
            .map_err(|_| usage_error(format!("not a 64-bit unsigned key: {text:?}")))?;
        writeln!(out, "{}", filter.contains(key)).map_err(|e| io_error(Path::new("stdout"), e))?;
    }
    Ok(())
}

fn run_bench(args: BenchArgs) -> Result<(), Failure> {
    let kinds = if args.filters.is_empty() {
        vec![
            FilterKind::Fuse3,
            FilterKind::Fuse4,
            FilterKind::Xor,
            FilterKind::Bloom,
        ]
    } else {
        args.filters.clone()
    };
    let sizes = if args.sizes.is_empty() {
        vec![10_000, 100_000, 1_000_000]
    } else {
        args.sizes.clone()
    };

    let mut rows = Vec::new();
    for &kind in &kinds {
        for &n in &sizes {
            if n == 0 {
                return Err(usage_error("bench requires n >= 1"));
            }
            let bits = resolve_bits(kind, Some(args.bits), None);
            let bits = if kind == FilterKind::Bloom {
                Bits::PerKey(args.bits_per_key)
            } else {
                bits
            };
            let config = BenchConfig {
                kind,
                n,
                bits,
                query_set_size: args.queries,
                in_set_fraction: args.in_set_fraction,
                repetitions: args.reps,
                key_mode: args.key_mode,
                rng_seed: args.seed,
            };
            config.validate().map_err(usage_error)?;
            rows.push(bench_cell(&config)?);
        }
    }

    match &args.out {
        Some(path) => {
            let mut buffer = Vec::new();
            emit_report(&mut rows, &mut buffer).expect("writing to memory cannot fail");
            std::fs::write(path, buffer).map_err(|e| io_error(path, e))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            emit_report(&mut rows, &mut out).map_err(|e| io_error(Path::new("stdout"), e))?;
        }
    }
    Ok(())
}

fn bench_cell(config: &BenchConfig) -> Result<BenchReport, Failure> {
    let seeds = config.stream_seeds();
    let keys = generate_keys(config.n, config.key_mode, seeds.keys);
    let built = build_filter(config, &keys).map_err(construction_error)?;
    let queries = generate_query_set(
        &keys,
        config.query_set_size,
        config.in_set_fraction,
        seeds.queries,
    );

    let construction_ns = time_construction(config, &keys).map_err(construction_error)?;
    let timing = time_queries(&built.filter, &queries, config.repetitions);
    eprintln!(
        "{} n={}: construction {:.2} ns/key, query {:.2} ns/query, {} matches in {} queries",
        config.kind.name(),
        config.n,
        construction_ns,
        timing.ns_per_query,
        timing.match_count,
        queries.len(),
    );

    Ok(BenchReport {
        kind: config.kind,
        n: config.n,
        bits: config.bits,
        construction_ns_per_key: construction_ns,
        query_ns_per_key: timing.ns_per_query,
        measured_fpp: timing.measured_fpp().unwrap_or(f64::NAN),
        bits_per_key: built
            .filter
            .bits_per_key(config.n)
            .expect("bench sizes are nonzero"),
        attempts: built.attempts,
    })
}

fn run_fpp(args: FppArgs) -> Result<(), Failure> {
    if args.queries < 1_000_000 {
        return Err(usage_error("fpp needs at least 10^6 probes"));
    }
    let config = single_config(&args.filter, &args.dataset)?;
    let seeds = config.stream_seeds();
    let keys = generate_keys(config.n, config.key_mode, seeds.keys);
    let built = build_filter(&config, &keys).map_err(construction_error)?;
    let fpp = measure_fpp(&built.filter, &keys, args.queries, seeds.probes);
    println!("{fpp}");
    Ok(())
}

fn run_theory(args: &TheoryArgs) -> Result<(), Failure> {
    let rows: Vec<u32> = match args.epsilon_bits {
        Some(bits) if bits == 0 => return Err(usage_error("epsilon bits must be positive")),
        Some(bits) => vec![bits],
        None => (4..=16).collect(),
    };
    println!("epsilon_bits,lower_bound,bloom,xor,xor_plus,fuse3,fuse4");
    for bits in rows {
        let eps = 0.5f64.powi(bits as i32);
        let cell = |model| theoretical_space(model, eps);
        println!(
            "{bits},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2}",
            cell(SpaceModel::LowerBound),
            cell(SpaceModel::Bloom),
            cell(SpaceModel::Xor),
            cell(SpaceModel::XorPlus),
            cell(SpaceModel::Fuse3),
            cell(SpaceModel::Fuse4),
        );
    }
    Ok(())
}
