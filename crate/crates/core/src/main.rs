use std::process::ExitCode;

use clap::Parser;
use parsedist::cli::{run, Cli};

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
