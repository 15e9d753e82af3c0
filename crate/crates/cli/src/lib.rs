//! Command-line front end: operator parsing, argument definitions and the subcommands.

pub mod args;
pub mod commands;
pub mod error;
pub mod parser;

use clap::Parser as _;

use args::{Cli, Command};
use commands::{Report, EXIT_ERROR};
use error::CliError;

/// Captured outcome of one invocation.
#[derive(Debug, Clone)]
pub struct Execution {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Solve(a) => commands::solve_cmd(a, g),
        Command::Transform(a) => commands::transform_cmd(a, g),
        Command::Diagnose(a) => commands::diagnose(a, g),
        Command::Demo => commands::demo(),
        Command::Sample(a) => commands::sample(a, g),
    }
}

/// Runs the CLI on `argv` (including the program name) without touching the process state.
pub fn run_from<I, T>(argv: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution { exit_code: 0, stdout: text, stderr: String::new() }
            } else {
                Execution { exit_code: code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok(r) => {
            let stdout = if cli.global.json { format!("{:#}\n", r.json) } else { r.text };
            Execution { exit_code: r.exit, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.global.json { format!("{:#}\n", e.to_json()) } else { String::new() };
            Execution { exit_code: EXIT_ERROR, stdout, stderr: format!("error: {e}\n") }
        }
    }
}
