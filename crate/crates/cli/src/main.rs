use std::process::ExitCode;

use clap::Parser;
use ddpc_cli::commands::{check, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match check(&cli).and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
