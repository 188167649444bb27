#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;
mod error;
mod manifest;

use clap::{ArgMatches, CommandFactory, FromArgMatches};

use args::{Cli, Command};
use error::CliError;

/// Applies `SPECWAVE_THREADS` (0 or unset means one worker per core).
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SPECWAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SPECWAVE_THREADS must be a non-negative integer, got '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

/// `--config PATH` or `--config=PATH` anywhere on the command line.
fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Folds config entries into `argv` ahead of clap, so required flags may
/// come from the file.
fn with_config(argv: &[String], path: &str) -> Result<Vec<String>, CliError> {
    let cmd = command();
    let Some(sub) = argv
        .iter()
        .skip(1)
        .find_map(|a| cmd.get_subcommands().find(|s| s.get_name() == a))
    else {
        return Ok(argv.to_vec());
    };
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let flags = config::to_flags(sub, &config::parse(&text)?)?;
    Ok(config::merge(argv, sub.get_name(), flags))
}

/// Parses `argv`. `Err(code)` means help, version or an error was printed.
fn parse(argv: &[String]) -> Result<(Cli, ArgMatches), i32> {
    let argv = match config_path(argv) {
        Some(path) => with_config(argv, &path).map_err(|e| {
            eprintln!("error: {e}");
            e.exit_code()
        })?,
        None => argv.to_vec(),
    };
    let m = command().try_get_matches_from(&argv).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            error::EXIT_USAGE
        } else {
            0
        }
    })?;
    let cli = Cli::from_arg_matches(&m).map_err(|e| {
        let _ = e.print();
        error::EXIT_USAGE
    })?;
    Ok((cli, m))
}

fn run(cli: Cli, m: &ArgMatches) -> Result<commands::Outcome, CliError> {
    configure_threads()?;
    let name = cli.command.name();
    let sub = command().find_subcommand(name).cloned().expect("known subcommand");
    let settings = config::resolved(&sub, m.subcommand_matches(name).expect("subcommand matched"));
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a, settings),
        Command::Gvpmap(a) => commands::gvpmap(a, settings),
        Command::Simulate(a) => commands::simulate(a, settings),
        Command::Measure(a) => commands::measure(a),
        Command::Reproduce(a) => commands::reproduce(a, settings),
    }
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let code = match parse(&argv) {
        Err(code) => code,
        Ok((cli, m)) => match run(cli, &m) {
            Ok(outcome) => {
                if let Some(v) = &outcome.json {
                    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
                }
                if outcome.failures > 0 {
                    let e = CliError::Reproduction(outcome.failures);
                    eprintln!("error: {e}");
                    e.exit_code()
                } else {
                    0
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    std::process::exit(code);
}
