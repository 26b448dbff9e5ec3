//! `semigraph` command-line driver.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error.

mod args;
mod bench;
mod output;
mod run;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Convert(a) => run::convert(&a).map(|()| true),
        Command::Run(a) => run::run(&a).map(|()| true),
        Command::Verify(a) => verify::verify(&a),
        Command::Bench(a) => bench::bench(&a).map(|()| true),
        Command::Stats(a) => run::stats(&a).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
