mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Status, UsageError};

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() || err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<porttour_core::Error>() {
        Some(porttour_core::Error::Parse { .. } | porttour_core::Error::Validation(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Partition(a) => commands::partition(a),
        Command::Label(a) => commands::label(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Verify(a) => commands::verify(a),
        Command::Oracle(a) => commands::oracle(a),
        Command::Bench(a) => commands::bench(a),
    };
    match res {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
