//! `sigprime`: build unitals, check linear spaces and group actions, and run
//! the parabolic-index divisibility scans. JSON in, JSON out.
//!
//! Exit codes: 0 all checks pass, 1 a check failed (JSON witness on stdout),
//! 2 usage or input error.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "sigprime", version, about = "Line-transitive linear spaces and groups of Lie type")]
pub struct Cli {
    /// Override the enumeration caps for groups and Weyl groups.
    #[arg(long, global = true)]
    pub cap: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the Hermitian unital H(q) with PSU(3, q).
    ConstructHermitian {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the Ree unital R(3) with PSL(2, 8) and its Frobenius extension.
    ConstructRee3 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Linear-space axioms, parameters and significant primes.
    CheckSpace { file: PathBuf },
    /// Orbit counts on lines, and on flags with --flags.
    CheckTransitivity {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        group: PathBuf,
        /// Member of the group file holding the group document.
        #[arg(long)]
        group_key: Option<String>,
        #[arg(long)]
        flags: bool,
    },
    /// Does the normalizer of a Sylow p-subgroup fix a point?
    CnpCheck {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        group_key: Option<String>,
        #[arg(long)]
        p: u64,
    },
    /// Group order via Schreier–Sims.
    GroupOrder {
        file: PathBuf,
        #[arg(long)]
        group_key: Option<String>,
    },
    /// Orbit sizes of a point stabilizer.
    Subdegrees {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        group_key: Option<String>,
        #[arg(long)]
        point: u32,
    },
    /// Parabolic index polynomial |W| / |W_J| with J the complement of --omit.
    WeylIndex {
        #[arg(long = "type")]
        label: String,
        #[arg(long)]
        rank: usize,
        /// Comma-separated 1-based simple roots, e.g. "1,3".
        #[arg(long)]
        omit: String,
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Divisibility scan for one case over prime powers up to --qmax.
    VerifyLemma {
        #[arg(long = "case")]
        case_id: String,
        #[arg(long)]
        qmax: u64,
    },
}

/// JSON result plus whether every check in it passed.
pub struct Outcome {
    pub body: Value,
    pub passed: bool,
    pub out: Option<PathBuf>,
}

fn emit(body: &Value, out: Option<&PathBuf>) -> Result<(), String> {
    let text = serde_json::to_string_pretty(body).expect("JSON values serialize") + "\n";
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn usage_error(message: String) -> ExitCode {
    eprintln!("error: {message}");
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({"status": "error", "error": message})).unwrap()
    );
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return usage_error(e.to_string().trim_end().to_string()),
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.body, outcome.out.as_ref()) {
                return usage_error(e);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => usage_error(format!("{e:#}")),
    }
}
