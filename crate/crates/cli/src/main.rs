//! Command-line front end: dataset generation, single-number factorization,
//! benchmarking, and dataset verification.
//!
//! Exit codes: 0 success, 1 domain failure (abort or verification failure),
//! 2 usage or parse error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rmfactor::arith::Natural;
use rmfactor::bench::{format_table, run_benchmark, write_report};
use rmfactor::dataset::{
    generate_dataset, read_dataset, validate_record, write_dataset, GeneratorSpec, MIN_DIGITS,
};
use rmfactor::factor::factor_with;
use rmfactor::{Error, Method, MethodConfig, Phase, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_DOMAIN: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rmfactor",
    about = "Fermat-family factoring methods with iteration instrumentation",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded semiprime dataset
    Generate(GenerateArgs),
    /// Factor a single number
    Factor(FactorArgs),
    /// Run factoring methods over a dataset and report mean iteration counts
    Bench(BenchArgs),
    /// Check every record invariant of a dataset file
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Decimal length r of every generated n
    #[arg(long)]
    digits: u32,
    /// Number of records
    #[arg(long)]
    count: usize,
    /// Generator seed; the same seed always yields the same file
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FactorArgs {
    /// The number to factor, in decimal
    n: String,
    /// Method: trial, fermat, lehman, sm, or rm
    #[arg(long, default_value = "rm")]
    method: Method,
    /// Multiplier m (RM radicand uses 4*m*n*K; SM uses m*n*k directly)
    #[arg(long, default_value = "120")]
    m: String,
    /// Disable the duplicate-K sieve (RM only)
    #[arg(long)]
    no_sieve: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Dataset file produced by `generate`
    #[arg(long)]
    dataset: PathBuf,
    /// Comma-separated method list, e.g. lehman,sm,rm
    #[arg(long, value_delimiter = ',', default_value = "rm")]
    methods: Vec<Method>,
    /// Multiplier for rm rows
    #[arg(long, default_value = "120")]
    rm_m: String,
    /// Multiplier for sm rows
    #[arg(long, default_value = "480")]
    sm_m: String,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Write the machine-readable report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dataset file to check
    path: PathBuf,
}

fn parse_natural(text: &str, what: &str) -> Result<Natural, String> {
    text.parse::<Natural>()
        .map_err(|e| format!("invalid {what} '{text}': {e}"))
}

fn cmd_generate(args: &GenerateArgs) -> Result<u8, (u8, String)> {
    if args.digits < MIN_DIGITS {
        return Err((
            EXIT_USAGE,
            format!("--digits must be >= {MIN_DIGITS}, got {}", args.digits),
        ));
    }
    if args.count == 0 {
        return Err((EXIT_USAGE, "--count must be >= 1".into()));
    }
    let spec = GeneratorSpec {
        digits: args.digits,
        count: args.count,
        seed: args.seed,
    };
    let records = generate_dataset(&spec).map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
    let file = File::create(&args.out)
        .map_err(|e| (EXIT_DOMAIN, format!("cannot create {}: {e}", args.out.display())))?;
    write_dataset(BufWriter::new(file), &records)
        .map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
    println!("{} records written to {}", records.len(), args.out.display());
    Ok(EXIT_OK)
}

fn cmd_factor(args: &FactorArgs) -> Result<u8, (u8, String)> {
    let n = parse_natural(&args.n, "number").map_err(|m| (EXIT_USAGE, m))?;
    let m = parse_natural(&args.m, "multiplier").map_err(|m| (EXIT_USAGE, m))?;
    let mut cfg = MethodConfig::new(args.method, 1u64);
    cfg.multiplier_m = m;
    cfg.sieve_enabled = !args.no_sieve;
    let outcome = factor_with(&n, &cfg).map_err(|e| match e {
        Error::InvalidInput(msg) => (EXIT_USAGE, msg),
        other => (EXIT_DOMAIN, other.to_string()),
    })?;
    let phase = match outcome.phase {
        Phase::TrialDivision => "trial-division",
        Phase::MultiplierSearch => "multiplier-search",
    };
    match &outcome.verdict {
        Verdict::Factored(f) => {
            let cofactor = &n / f;
            println!("{n} = {f} * {cofactor}");
            println!("iterations: {}", outcome.iterations);
            println!("phase: {phase}");
            Ok(EXIT_OK)
        }
        Verdict::ProbablePrime => {
            println!("{n} is a probable prime");
            println!("iterations: {}", outcome.iterations);
            println!("phase: {phase}");
            Ok(EXIT_OK)
        }
        Verdict::Aborted => {
            println!("aborted at safety cap after {} iterations", outcome.iterations);
            Ok(EXIT_DOMAIN)
        }
    }
}

fn read_dataset_file(path: &PathBuf) -> Result<Vec<rmfactor::DatasetRecord>, (u8, String)> {
    let file = File::open(path)
        .map_err(|e| (EXIT_USAGE, format!("cannot open {}: {e}", path.display())))?;
    read_dataset(BufReader::new(file)).map_err(|e| match e {
        Error::Parse { .. } => (EXIT_USAGE, format!("{}: {e}", path.display())),
        other => (EXIT_DOMAIN, other.to_string()),
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, (u8, String)> {
    let records = read_dataset_file(&args.dataset)?;
    let rm_m = parse_natural(&args.rm_m, "--rm-m").map_err(|m| (EXIT_USAGE, m))?;
    let sm_m = parse_natural(&args.sm_m, "--sm-m").map_err(|m| (EXIT_USAGE, m))?;
    let cfgs: Vec<MethodConfig> = args
        .methods
        .iter()
        .map(|&method| {
            let mut cfg = MethodConfig::new(method, 1u64);
            match method {
                Method::Rm => cfg.multiplier_m = rm_m.clone(),
                Method::Sm => cfg.multiplier_m = sm_m.clone(),
                _ => {}
            }
            cfg
        })
        .collect();
    let rows =
        run_benchmark(&records, &cfgs, args.workers).map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
    match &args.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| (EXIT_DOMAIN, format!("cannot create {}: {e}", path.display())))?;
            write_report(BufWriter::new(file), &rows)
                .map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
            print!("{}", format_table(&rows));
        }
        None => {
            let mut out = Vec::new();
            write_report(&mut out, &rows).map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
            std::io::stdout()
                .write_all(&out)
                .map_err(|e| (EXIT_DOMAIN, e.to_string()))?;
        }
    }
    let failures: usize = rows.iter().map(|r| r.failures).sum();
    if failures > 0 {
        eprintln!("{failures} record(s) failed verification");
        return Ok(EXIT_DOMAIN);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, (u8, String)> {
    let records = read_dataset_file(&args.path)?;
    for (i, rec) in records.iter().enumerate() {
        if let Err(e) = validate_record(rec) {
            return Err((EXIT_DOMAIN, format!("record {}: {e}", i + 1)));
        }
    }
    println!("{} records verified", records.len());
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Factor(args) => cmd_factor(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
