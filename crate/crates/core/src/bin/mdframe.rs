use std::process::ExitCode;

use clap::Parser;
use mdframe::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("mdframe: {failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
