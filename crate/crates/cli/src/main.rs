use std::process::ExitCode;

use clap::Parser;
use tribasis_cli::args::Cli;
use tribasis_cli::error::exit;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tribasis_cli::run(&cli) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
