//! Batch command-line harness around the hyperbolic-cross library.
//!
//! ```text
//! hypercross <suite> --config PATH --out PATH [--seed U64] [--threads K]
//! ```
//!
//! Suites: `lemmas`, `rates`, `inequalities`, `sets`, `witness`, `norms`.
//! Logs go to standard error; results go only to the output file.
//! Exit codes: 0 success, 1 validation error, 2 runtime error.

mod config;
mod csv;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use config::parse_config;
use suites::{CliError, RunOptions, Suite};

struct Args {
    suite: Suite,
    config: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    threads: Option<usize>,
}

const USAGE: &str =
    "usage: hypercross <lemmas|rates|inequalities|sets|witness|norms> --config PATH --out PATH [--seed U64] [--threads K]";

fn parse_args() -> Result<Args, String> {
    let mut argv = std::env::args().skip(1);
    let suite_name = argv.next().ok_or(USAGE)?;
    let suite = Suite::from_name(&suite_name)
        .ok_or_else(|| format!("unknown suite `{}`\n{}", suite_name, USAGE))?;
    let mut config = None;
    let mut out = None;
    let mut seed = None;
    let mut threads = None;
    while let Some(flag) = argv.next() {
        let mut value_for = |flag: &str| {
            argv.next()
                .ok_or_else(|| format!("flag {} needs a value\n{}", flag, USAGE))
        };
        match flag.as_str() {
            "--config" => config = Some(PathBuf::from(value_for("--config")?)),
            "--out" => out = Some(PathBuf::from(value_for("--out")?)),
            "--seed" => {
                seed = Some(
                    value_for("--seed")?
                        .parse::<u64>()
                        .map_err(|_| "--seed must be an unsigned integer".to_string())?,
                )
            }
            "--threads" => {
                threads = Some(
                    value_for("--threads")?
                        .parse::<usize>()
                        .map_err(|_| "--threads must be a positive integer".to_string())?,
                )
            }
            other => return Err(format!("unknown flag `{}`\n{}", other, USAGE)),
        }
    }
    Ok(Args {
        suite,
        config: config.ok_or_else(|| format!("--config is required\n{}", USAGE))?,
        out,
        seed,
        threads,
    })
}

fn run() -> Result<(), CliError> {
    let args = parse_args().map_err(CliError::Validation)?;
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Validation(format!("cannot read config {}: {}", args.config.display(), e))
    })?;
    let cfg = parse_config(&text)?;
    let out = match args.out {
        Some(path) => path,
        None => PathBuf::from(cfg.string("out").ok_or_else(|| {
            CliError::Validation("output path required (`--out` flag or `out` key)".into())
        })?),
    };
    let opts = RunOptions {
        seed: match args.seed {
            Some(s) => s,
            None => cfg.u64_or("seed", 0).map_err(CliError::from)?,
        },
        threads: match args.threads {
            Some(t) => t.max(1),
            None => cfg.usize_or("threads", 1).map_err(CliError::from)?.max(1),
        },
        oversample: cfg.usize_or("oversample", 1).map_err(CliError::from)?.max(1),
    };
    suites::run(args.suite, &cfg, &out, opts)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("validation error: {}", msg);
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("runtime error: {}", msg);
            ExitCode::from(2)
        }
    }
}
