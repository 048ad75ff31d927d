//! File formats, subcommands and parallel sweeps for `tribasis`.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;
pub mod state_spec;
pub mod sweep;

use args::{Cli, Command, SweepArgs};
use error::CliResult;

fn cmd_sweep(args: &SweepArgs) -> CliResult<()> {
    let config = sweep::load_config(&args.input)?;
    let csv = sweep::to_csv(&sweep::run(&config, !args.sequential, true)?)?;
    match &args.output {
        Some(path) => formats::write_text(path, &csv),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(a) => commands::cmd_simulate(a),
        Command::Reconstruct(a) => commands::cmd_reconstruct(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::OracleCheck(a) => commands::cmd_oracle_check(a),
    }
}
