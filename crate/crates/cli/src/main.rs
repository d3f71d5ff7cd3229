mod infer;
mod input;
mod plot;
mod simulate;
mod table1;

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Sign inference with controlled sign error rates for normal means.
#[derive(Debug, Parser)]
#[command(name = "signgate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infer signs for a list of z statistics.
    Infer(infer::InferArgs),
    /// Run a Monte Carlo scenario file and report SEP and sign counts.
    Simulate(simulate::SimulateArgs),
    /// Recompute the shifted chi-square acceptance-region example.
    Table1(table1::Table1Args),
}

/// Exit status for input and usage problems.
const EXIT_INPUT: u8 = 2;
/// Exit status for numerical failures.
const EXIT_NUMERICAL: u8 = 3;

fn exit_code(err: &anyhow::Error) -> u8 {
    use signgate::Error as E;
    match err.downcast_ref::<E>() {
        Some(
            E::Bracketing { .. }
            | E::NonConvergence { .. }
            | E::DegenerateRegion { .. }
            | E::Infeasible { .. },
        ) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// Write `text` to `path`, or to stdout when no path is given.
pub(crate) fn emit(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    use anyhow::Context;
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Infer(args) => infer::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Table1(args) => table1::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
