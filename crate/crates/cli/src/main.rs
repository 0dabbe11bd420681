mod args;
mod output;
mod sol_cmd;
mod trace_cmd;
mod walk_cmd;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::{CliError, Status};

fn run(argv: Vec<String>) -> Result<Status, CliError> {
    let cli = Cli::try_parse_from(&argv).map_err(CliError::Clap)?;
    let command_line = argv.join(" ");
    match cli.command {
        Command::Walk(w) => walk_cmd::run(w, &command_line),
        Command::Trace(t) => trace_cmd::run(t, &command_line),
        Command::Sol(s) => sol_cmd::run(s, &command_line),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violated(what)) => {
            eprintln!("invariant violated: {what}");
            ExitCode::from(2)
        }
        Err(CliError::Clap(e)) => {
            let _ = e.print();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `groupwalk --help` for usage");
            ExitCode::from(1)
        }
        Err(CliError::Invariant(msg)) => {
            eprintln!("invariant violated: {msg}");
            ExitCode::from(2)
        }
    }
}

