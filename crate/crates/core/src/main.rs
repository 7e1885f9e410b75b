use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cartensor::corpus;
use cartensor::oracle::{verify_result, DEFAULT_SEED};
use cartensor::parser::parse;
use cartensor::reduce::{reduce, CouplingExpr, ReductionResult};
use cartensor::render::{result_json, result_latex, result_text};

const USAGE_ERR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cartensor",
    version,
    about = "Reduce couplings of spherical harmonics to Cartesian form"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Cartesian reduction of an expression.
    Reduce {
        expr: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the reduction with direct evaluation at random unit vectors.
    Verify {
        expr: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Defaults to $CARTENSOR_SEED, then a built-in seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check or regenerate the stored corpus.
    Corpus {
        #[arg(long)]
        regen: bool,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_ERR } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::Reduce { expr, format } => match load(&expr) {
            Ok((_, r)) => {
                match format {
                    Format::Text => println!("{}", result_text(&r)),
                    Format::Latex => println!("{}", result_latex(&r)),
                    Format::Json => println!("{}", result_json(&r)),
                }
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Cmd::Verify {
            expr,
            samples,
            tol,
            seed,
        } => {
            if samples == 0 {
                eprintln!("error: --samples must be at least 1");
                return ExitCode::from(USAGE_ERR);
            }
            let seed = match seed.map(Ok).unwrap_or_else(env_seed) {
                Ok(s) => s,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    return ExitCode::from(USAGE_ERR);
                }
            };
            match load(&expr) {
                Ok((_, r)) => {
                    let rep = verify_result(&r, samples, tol, seed);
                    println!("{}", serde_json::to_string(&rep).expect("report serializes"));
                    if rep.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(code) => code,
            }
        }
        Cmd::Corpus { regen, check, file } => run_corpus(regen, check, file.unwrap_or_else(corpus::default_path)),
    }
}

fn env_seed() -> Result<u64, String> {
    match std::env::var("CARTENSOR_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("CARTENSOR_SEED is not an integer: {s:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load(src: &str) -> Result<(CouplingExpr, ReductionResult), ExitCode> {
    let expr = parse(src).map_err(|e| {
        eprintln!("{}", e.diagnostic(src));
        ExitCode::from(USAGE_ERR)
    })?;
    let r = reduce(&expr).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(USAGE_ERR)
    })?;
    Ok((expr, r))
}

fn run_corpus(regen: bool, check: bool, path: PathBuf) -> ExitCode {
    let mut entries = match corpus::load(&path) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERR);
        }
    };
    if regen {
        entries = match corpus::regen(&entries) {
            Ok(e) => e,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(USAGE_ERR);
            }
        };
        if let Err(e) = corpus::save(&path, &entries) {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERR);
        }
        eprintln!("wrote {} entries to {}", entries.len(), path.display());
    }
    if check || !regen {
        let rep = corpus::check(&entries);
        println!("{rep}");
        if !rep.all_pass() {
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}
