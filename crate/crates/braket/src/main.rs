use std::io::{self, IsTerminal};
use std::path::PathBuf;
use std::process::ExitCode;

use braket::check::Level;
use braket::cli::{self, CliConfig, DEFAULT_SEED};
use braket_core::Strategy;
use clap::{ArgGroup, Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CheckArg {
    Quick,
    Full,
}

/// Evaluate Dirac bra-ket terms where kets may be vectors or functions.
#[derive(Debug, Parser)]
#[command(name = "braket", version)]
#[command(group(ArgGroup::new("mode").args(["eval", "check", "repl"])))]
struct Args {
    /// Workspace file with `dim` and `let` lines.
    #[arg(long, value_name = "PATH")]
    workspace: Option<PathBuf>,

    /// Evaluate one expression and exit.
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    eval: Option<String>,

    /// Ket resolution: final-vector, first-function, all-function or explicit.
    #[arg(long, default_value = "final-vector")]
    strategy: Strategy,

    /// Apply a resulting function out of C to the scalar 1.
    #[arg(long)]
    apply_one: bool,

    /// Run the property suites.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "quick")]
    check: Option<CheckArg>,

    /// Seed for the randomized suites, decimal or 0x-prefixed hex.
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,

    /// Interactive session (the default when no other mode is given).
    #[arg(long)]
    repl: bool,
}

fn parse_seed(s: &str) -> Result<u64, std::num::ParseIntError> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = CliConfig {
        workspace_path: args.workspace,
        strategy: args.strategy,
        apply_one: args.apply_one,
        seed: args.seed,
        check_level: args.check.map(|c| match c {
            CheckArg::Quick => Level::Quick,
            CheckArg::Full => Level::Full,
        }),
    };
    let mut stdout = io::stdout().lock();

    if let Some(expr) = &args.eval {
        return match cli::run_eval(&config, expr, &mut stdout) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }

    if config.check_level.is_some() {
        return match cli::run_check(&config, &mut stdout) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(2),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        };
    }

    let stdin = io::stdin();
    let prompt = stdin.is_terminal();
    match cli::run_repl(
        &config,
        stdin.lock(),
        &mut stdout,
        &mut io::stderr(),
        prompt,
    ) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
