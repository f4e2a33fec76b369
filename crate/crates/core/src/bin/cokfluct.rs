use std::process::ExitCode;

use clap::Parser;
use cokfluct::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli, &mut std::io::stdout().lock()))
}
