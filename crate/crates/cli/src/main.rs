use std::process::ExitCode;

use clap::Parser;
use optomech_cli::app::{self, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match app::execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
