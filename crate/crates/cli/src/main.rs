mod args;
mod commands;
mod error;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gamma(a) => commands::gamma(a),
        Command::State(a) => commands::state(a),
        Command::Discord(a) => commands::discord(a),
        Command::Gmqd(a) => commands::gmqd(a),
        Command::Region(a) => commands::region(a),
        Command::Levels(a) => commands::levels(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
