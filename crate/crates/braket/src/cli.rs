//! Batch evaluation, the property-check runner and the REPL.

use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use braket_core::{
    apply, eval, infer_kind, parse_term, Argument, Domain, Label, ParseError, Scalar, Strategy,
    Value, Vector, Workspace,
};
use thiserror::Error;

use crate::check::{self, Clauses, Level};
use crate::workspace_file::{self, load_workspace, LoadError};

pub const DEFAULT_SEED: u64 = 0xD1AC;

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub workspace_path: Option<PathBuf>,
    pub strategy: Strategy,
    pub apply_one: bool,
    pub seed: u64,
    pub check_level: Option<Level>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            workspace_path: None,
            strategy: Strategy::FinalVector,
            apply_one: false,
            seed: DEFAULT_SEED,
            check_level: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read workspace {path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("workspace {path}: {source}")]
    Load { path: PathBuf, source: LoadError },

    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("{0}")]
    Eval(#[from] braket_core::Error),

    #[error("write failed: {0}")]
    Output(#[from] io::Error),
}

pub fn read_workspace(path: &Path) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_workspace(&text).map_err(|source| CliError::Load {
        path: path.to_path_buf(),
        source,
    })
}

fn initial_workspace(config: &CliConfig) -> Result<Option<Workspace>, CliError> {
    config
        .workspace_path
        .as_deref()
        .map(read_workspace)
        .transpose()
}

fn empty_workspace() -> Workspace {
    Workspace::new(1).expect("positive dimension")
}

/// Evaluates `expr`; with `apply_one`, a function out of `C` is applied to 1.
fn evaluate(
    expr: &str,
    ws: &Workspace,
    strategy: Strategy,
    apply_one: bool,
) -> Result<Value, CliError> {
    let term = parse_term(expr)?;
    let value = eval(&term, ws, strategy)?;
    if apply_one && value.kind().domain() == Some(Domain::C) {
        return Ok(apply(&value, &Argument::Scalar(Scalar::new(1.0, 0.0)))?);
    }
    Ok(value)
}

/// Prints `kind: <kind>` and `value: <value>`.
pub fn run_eval(config: &CliConfig, expr: &str, out: &mut impl Write) -> Result<(), CliError> {
    let ws = initial_workspace(config)?.unwrap_or_else(empty_workspace);
    let value = evaluate(expr, &ws, config.strategy, config.apply_one)?;
    writeln!(out, "kind: {}", value.kind())?;
    writeln!(out, "value: {value}")?;
    Ok(())
}

/// Runs the property suites; returns whether all passed.
pub fn run_check(config: &CliConfig, out: &mut impl Write) -> io::Result<bool> {
    let level = config.check_level.unwrap_or(Level::Quick);
    let report = check::run_check(level, config.seed, &Clauses);
    writeln!(out, "check level {level:?}, seed {:#x}", config.seed)?;
    writeln!(out, "{report}")?;
    Ok(report.all_passed())
}

const HELP: &str = "\
commands:
  dim <n>              start a fresh workspace of dimension n
  let <label> = [...]  bind a vector
  <expr>               evaluate a term, e.g. <x|y> or |y><x|
  :kind <expr>         infer the kind of a term
  :strategy [<name>]   show or set final-vector | first-function | all-function | explicit
  :help                this text
  :quit                leave";

enum Step {
    Print(String),
    Silent,
    Quit,
}

struct Session {
    ws: Option<Workspace>,
    strategy: Strategy,
    apply_one: bool,
}

impl Session {
    fn handle(&mut self, line: &str) -> Result<Step, String> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return Ok(Step::Silent);
        }
        if let Some(cmd) = line.strip_prefix(':') {
            let (name, arg) = cmd.split_once(char::is_whitespace).unwrap_or((cmd, ""));
            let arg = arg.trim();
            return match name {
                "quit" | "q" => Ok(Step::Quit),
                "help" => Ok(Step::Print(HELP.to_string())),
                "strategy" if arg.is_empty() => {
                    Ok(Step::Print(format!("strategy: {}", self.strategy)))
                }
                "strategy" => {
                    self.strategy = arg
                        .parse()
                        .map_err(|e| format!("unknown strategy `{arg}`: {e}"))?;
                    Ok(Step::Print(format!("strategy: {}", self.strategy)))
                }
                "kind" => {
                    let term = parse_term(arg).map_err(|e| e.to_string())?;
                    let kind = infer_kind(&term, self.strategy).map_err(|e| e.to_string())?;
                    Ok(Step::Print(kind.to_string()))
                }
                _ => Err(format!("unknown command `:{name}` (try :help)")),
            };
        }
        if let Some(dim) = workspace_file::parse_dim(line) {
            let dim = dim?;
            self.ws = Some(Workspace::new(dim).map_err(|e| e.to_string())?);
            return Ok(Step::Silent);
        }
        if line.starts_with("let") && line[3..].starts_with(|c: char| c.is_whitespace()) {
            let (label, components): (Label, _) = workspace_file::parse_binding(line)?;
            let ws = self
                .ws
                .as_mut()
                .ok_or("no dimension set; use `dim <n>` first")?;
            let v = Vector::new(components).map_err(|e| e.to_string())?;
            ws.bind_in_place(label, v).map_err(|e| e.to_string())?;
            return Ok(Step::Silent);
        }
        let fallback;
        let ws = match &self.ws {
            Some(ws) => ws,
            None => {
                fallback = empty_workspace();
                &fallback
            }
        };
        let value = evaluate(line, ws, self.strategy, self.apply_one).map_err(|e| e.to_string())?;
        Ok(Step::Print(value.to_string()))
    }
}

/// Line-oriented session over `input`. Results go to `out`, one diagnostic
/// line per failed input line to `err`.
pub fn run_repl(
    config: &CliConfig,
    input: impl BufRead,
    out: &mut impl Write,
    err: &mut impl Write,
    prompt: bool,
) -> Result<(), CliError> {
    let mut session = Session {
        ws: initial_workspace(config)?,
        strategy: config.strategy,
        apply_one: config.apply_one,
    };
    let show_prompt = |out: &mut dyn Write| -> io::Result<()> {
        if prompt {
            write!(out, "braket> ")?;
            out.flush()?;
        }
        Ok(())
    };
    show_prompt(out)?;
    for line in input.lines() {
        match session.handle(&line?) {
            Ok(Step::Print(s)) => writeln!(out, "{s}")?,
            Ok(Step::Silent) => {}
            Ok(Step::Quit) => return Ok(()),
            Err(e) => writeln!(err, "error: {e}")?,
        }
        show_prompt(out)?;
    }
    Ok(())
}
