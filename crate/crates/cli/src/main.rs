//! `mixshape`: decide mixing properties of toral epimorphism families.
//!
//! Reads one JSON job (`{"dim", "matrices", "options"}`) from standard input
//! or `--input`, writes one JSON report to standard output. Exit status is 0
//! whenever a result was computed, 2 for malformed input and 3 for inputs
//! that violate a precondition (singular matrix, mismatched dimensions, ...).

mod commands;
mod input;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use input::{parse_payload, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Per-map ergodicity.
    Ergodic,
    /// Mixing of the whole set, with certificate.
    MixingSet,
    /// Pair criterion via the invariant sublattice.
    MixingPair,
    /// Pairwise criterion for commuting families.
    Commuting,
    /// Mixing of every subset of size at most d + 1.
    Joint,
    /// Correlation limits along residue classes.
    Limit,
    /// Bounded search for a group element refuting mixing.
    GroupScan,
    /// Bounded search for a finite dual orbit.
    OrbitScan,
    /// Build a named counterexample family.
    GenExample,
    /// Brute-force relation search.
    OracleSearch,
    /// Monte Carlo correlation estimate.
    OracleMc,
    /// Replay a mixing-set certificate.
    VerifyCert,
}

impl Command {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Debug, Default)]
pub struct Flags {
    pub max_exponent: Option<u64>,
    pub seed: Option<u64>,
    pub height: Option<u64>,
    pub horizon: Option<u64>,
    pub word_len: Option<u64>,
    pub residue: Option<u64>,
}

#[derive(Debug, Parser)]
#[command(name = "mixshape", version, about = "Exact mixing decisions for toral epimorphisms")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Read the job from this file instead of standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Also check every exponent up to N.
    #[arg(long, value_name = "N")]
    max_exponent: Option<u64>,
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, value_name = "N")]
    height: Option<u64>,
    /// Relation horizon for oracle-search; time n for oracle-mc.
    #[arg(long, value_name = "N")]
    horizon: Option<u64>,
    #[arg(long, value_name = "N")]
    word_len: Option<u64>,
    #[arg(long, value_name = "K")]
    residue: Option<u64>,
    /// Summary on standard error.
    #[arg(long)]
    verbose: bool,
    /// Add elapsed wall time to the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| input::parse_err(format!("{}: {e}", p.display())))?
        }
        None => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| input::parse_err(e.to_string()))?;
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags {
        max_exponent: cli.max_exponent,
        seed: cli.seed,
        height: cli.height,
        horizon: cli.horizon,
        word_len: cli.word_len,
        residue: cli.residue,
    };
    let start = Instant::now();
    let name = cli.command.name();
    let result = read_input(cli.input.as_ref())
        .and_then(|text| parse_payload(&text))
        .and_then(|payload| commands::run(&name, &flags, &payload));
    match result {
        Ok((mut body, summary)) => {
            body.insert("command".into(), Value::String(name.clone()));
            let elapsed = start.elapsed();
            if cli.timing {
                body.insert("elapsed_ms".into(), serde_json::json!(elapsed.as_millis() as u64));
            }
            println!("{}", serde_json::to_string_pretty(&Value::Object(body)).expect("valid JSON"));
            if cli.verbose {
                eprintln!("{name}: {summary} [{:.3}s]", elapsed.as_secs_f64());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("mixshape {name}: {e}");
            ExitCode::from(match e {
                CliError::Parse(_) => 2,
                CliError::Contract(_) => 3,
            })
        }
    }
}
