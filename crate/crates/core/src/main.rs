use std::process::ExitCode;

use clap::Parser;
use cubecvx::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
