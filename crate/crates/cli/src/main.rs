//! Experiment driver for the quantum-search simulation library.
//!
//! `sweep` emits a plot-ready table (one row per step count, closed form
//! next to the exact oracle where feasible); `check` runs the
//! closed-form-versus-oracle invariants for the configured model and sets
//! the exit code accordingly.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 crosscheck failure,
//! 3 oracle infeasible under the amplitude budget. Identical
//! configuration and seed produce byte-identical output.

use clap::error::ErrorKind;
use clap::Parser;
use std::io::Write;
use std::process::ExitCode;

mod args;
mod config;
mod experiment;
mod output;

use args::{Cli, Command, OutputFormat};
use config::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            if !matches!(err, CliError::CheckFailed) {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            let config = config::resolve(&args)?;
            let sweep = experiment::run_sweep(&config)?;
            let text = match config.format {
                OutputFormat::Csv => output::render_csv(&sweep),
                OutputFormat::Json => output::render_json(&sweep),
            };
            write_out(&config.out, &text)
        }
        Command::Check(args) => {
            let config = config::resolve(&args)?;
            let report = experiment::run_check(&config)?;
            let text = output::render_check_report(&report);
            write_out(&config.out, &text)?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(CliError::CheckFailed)
            }
        }
    }
}

fn write_out(target: &str, text: &str) -> Result<(), CliError> {
    if target == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::InvalidConfig(format!("cannot write to stdout: {e}")))
    } else {
        std::fs::write(target, text)
            .map_err(|e| CliError::InvalidConfig(format!("cannot write {target}: {e}")))
    }
}
