use std::process::ExitCode;

use clap::Parser;
use susy_calogero_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.into_config().and_then(|c| run(&c)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("susy-calogero: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
