mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Command, DiagCommand};
use manifest::RunManifest;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed inputs. Exit code 2.
    Usage(String),
    /// Sampler or solver failure. Exit code 1.
    Runtime(String),
}

impl From<wsm::Error> for CliError {
    fn from(e: wsm::Error) -> Self {
        match e {
            wsm::Error::Batch { index, source } => {
                CliError::Runtime(format!("solve failed at weight index {index}: {source}"))
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn run(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    match cli.command {
        Command::Sample(a) => commands::sample(&a, argv),
        Command::Solve(a) => commands::solve(&a, argv),
        Command::Adapt(a) => commands::adapt(&a, argv),
        Command::Diag(DiagCommand::Qq(a)) => commands::diag_qq(&a, argv),
        Command::Diag(DiagCommand::Growth(a)) => commands::diag_growth(&a, argv),
        Command::Replay(a) => {
            let manifest = RunManifest::read_from(&a.file)?;
            let replayed = commands::replay_argv(&manifest, a.out.as_ref(), a.audit.as_ref());
            let cli = Cli::try_parse_from(&replayed)
                .map_err(|e| CliError::Usage(format!("recorded arguments no longer parse: {e}")))?;
            if matches!(cli.command, Command::Replay(_)) {
                return Err(CliError::Usage(
                    "a manifest cannot replay another replay".into(),
                ));
            }
            run(cli, &replayed[1..])
        }
    }
}

/// Usage line of the deepest subcommand named in `argv`.
fn usage_for(argv: &[String]) -> clap::builder::StyledStr {
    let mut cmd = Cli::command();
    for arg in argv.iter().skip(1) {
        match cmd.find_subcommand(arg) {
            Some(sub) => {
                cmd = sub
                    .clone()
                    .bin_name(format!("{} {arg}", cmd.get_bin_name().unwrap_or("wsm")))
            }
            None => break,
        }
    }
    cmd.render_usage()
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}\n", usage_for(&argv));
            eprintln!("For more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
