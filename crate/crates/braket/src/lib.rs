//! Workspace files, seeded property suites, and the command-line front end
//! for [`braket_core`].

pub mod check;
pub mod cli;
pub mod gen;
pub mod workspace_file;

pub use check::{run_check, Clauses, Evaluator, Level, Report, SuiteResult};
pub use cli::{run_eval, run_repl, CliConfig, CliError, DEFAULT_SEED};
pub use workspace_file::{dump_workspace, load_workspace, LoadError};
