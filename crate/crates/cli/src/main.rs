//! `apn`: command-line front end for apn-core.
//!
//! Exit status is 0 on success (a search that finds nothing still
//! succeeds), 1 on usage or parse errors and 2 when an internal invariant
//! fails.

mod commands;
mod input;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use apn_core::Exec;

#[derive(Parser, Debug)]
#[command(name = "apn", version, about = "Analyze, trim and extend APN functions")]
pub struct Cli {
    /// Worker threads; 0 uses every core and 1 runs sequentially.
    #[arg(long, global = true, env = "APN_PARALLELISM", default_value_t = 0)]
    pub parallelism: usize,

    #[command(subcommand)]
    pub command: Command,
}

/// A function file (`-` for stdin) or `@name` for a built-in fixture.
#[derive(Args, Debug, Clone)]
pub struct OneInput {
    pub input: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree, APN property, linearity, spectra and signature.
    Analyze {
        #[command(flatten)]
        src: OneInput,
        /// One JSON object per function instead of key=value lines.
        #[arg(long)]
        json: bool,
    },
    /// Signature multiset over all trims.
    TrimSpectrum {
        #[command(flatten)]
        src: OneInput,
        /// Only linear hyperplanes (requires degree at most 2).
        #[arg(long)]
        quadratic_reduced: bool,
    },
    /// Trimming graph of APN functions, as DOT and JSON lines.
    TrimGraph {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// DOT output path (stdout by default).
        #[arg(long)]
        dot: Option<String>,
        /// Edge list output path.
        #[arg(long)]
        jsonl: Option<String>,
    },
    /// A chain of APN trims down to two bits.
    Recursive {
        #[command(flatten)]
        src: OneInput,
    },
    /// Extensions with r = 0, one per signature.
    ZeroExtend {
        #[command(flatten)]
        src: OneInput,
        /// Append results to this JSON-lines store.
        #[arg(long)]
        out: Option<String>,
        /// Write the extensions as `lut` records to this path.
        #[arg(long)]
        emit: Option<String>,
    },
    /// Randomized backtracking search for extensions with quadratic r.
    #[command(name = "r-extend")]
    RExtend {
        #[command(flatten)]
        src: OneInput,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Total node budget, split evenly over the restarts; accepts `10^7`.
        #[arg(long, default_value = "10^6", value_parser = parse_count)]
        budget: u64,
        #[arg(long, default_value_t = 8)]
        restarts: u64,
        /// Fixed r as a hex monomial mask instead of sampling it.
        #[arg(long, value_parser = parse_hex_u128)]
        r: Option<u128>,
        #[arg(long)]
        out: Option<String>,
        #[arg(long)]
        emit: Option<String>,
    },
    /// Rewrite functions in another text format.
    Convert {
        #[command(flatten)]
        src: OneInput,
        #[arg(long, value_enum, default_value_t = Format::Lut)]
        to: Format,
        /// Field modulus for `uni` output (the default field otherwise).
        #[arg(long, value_parser = parse_hex_u32)]
        modulus: Option<u32>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Lut,
    Uni,
    Bare,
}

fn parse_count(s: &str) -> Result<u64, String> {
    let s = s.replace('_', "");
    let bad = || format!("'{s}' is not a count (try 1000000 or 10^6)");
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn strip_hex(s: &str) -> &str {
    s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s)
}

fn parse_hex_u128(s: &str) -> Result<u128, String> {
    u128::from_str_radix(strip_hex(s), 16).map_err(|e| format!("'{s}': {e}"))
}

fn parse_hex_u32(s: &str) -> Result<u32, String> {
    u32::from_str_radix(strip_hex(s), 16).map_err(|e| format!("'{s}': {e}"))
}

fn run_with_pool(cli: Cli) -> anyhow::Result<String> {
    let exec = if cli.parallelism == 1 { Exec::Sequential } else { Exec::Parallel };
    #[cfg(feature = "parallel")]
    if cli.parallelism > 1 {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.parallelism).build()?;
        return pool.install(|| commands::run(&cli.command, exec));
    }
    commands::run(&cli.command, exec)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let invariant = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<apn_core::Error>(), Some(apn_core::Error::Invariant(_))));
    if invariant {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run_with_pool(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
