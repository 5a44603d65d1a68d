//! `coopgame`: command-line front end for cooperative-game analyses.
//!
//! Exit codes: 0 on success, 1 when a property asserted by the command
//! fails, 2 on malformed input.

mod args;
mod commands;
mod report;
mod search;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{CliResult, Outcome};

fn run(cli: &Cli) -> CliResult<Outcome> {
    let opts = &cli.global;
    match &cli.command {
        Command::Analyze { game } => commands::analyze(game, opts),
        Command::Construct {
            kind,
            input,
            output,
            samples,
        } => commands::construct_command(*kind, input, output.as_deref(), *samples),
        Command::Robust { input } => commands::robust(input),
        Command::Tolerance { game, ceiling } => commands::tolerance(game, ceiling, opts),
        Command::Xos { game } => commands::xos(game, opts),
        Command::EpiCheck {
            gaussian, partition, ..
        } => commands::epi_check(gaussian, partition.as_deref()),
        Command::Lfp {
            u,
            v,
            reverse,
            max_iter,
        } => commands::lfp(u, v, *reverse, *max_iter, opts),
        Command::LrCheck { u, v, step, gap } => commands::lr_check(u, v, *step, *gap),
        Command::Mbc { n } => commands::mbc(*n),
        Command::Search { kind, trials } => search::search(*kind, opts.seed, *trials),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Some(raw) = &outcome.raw {
                print!("{raw}");
                for line in &outcome.lines {
                    eprintln!("{line}");
                }
            } else if cli.global.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.reports).expect("reports serialize")
                );
            } else {
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
