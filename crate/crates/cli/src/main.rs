mod cli;
mod commands;
mod error;
mod input;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use commands::{Estimator, RunConfig};
use error::CliError;

fn dispatch(cli: Cli) -> Result<(), CliError> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let (estimator, args) = match cli.command {
        Command::RunCc(a) => (Estimator::Cc, a),
        Command::RunMst(a) => (Estimator::Mst, a),
        Command::RunDisc(a) => (Estimator::Disc, a),
        Command::RunMis(a) => (Estimator::Mis, a),
        Command::Verify(a) => return commands::verify(&a),
        Command::Params(a) => return commands::params(&a),
        Command::Gen(a) => return commands::gen(&a),
    };
    commands::run(&RunConfig::from_args(estimator, args)?)
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
