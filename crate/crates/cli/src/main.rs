use std::process::ExitCode;

use clap::Parser;
use lscat_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("lscat {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
