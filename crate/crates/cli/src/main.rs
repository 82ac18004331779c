use std::process::ExitCode;

use clap::Parser;
use vnlattice_cli::{run, Cli};

fn main() -> ExitCode {
    run(&Cli::parse())
}
