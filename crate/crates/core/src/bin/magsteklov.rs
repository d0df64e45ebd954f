use std::process::ExitCode;

use clap::Parser;
use magsteklov::cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(cli).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("magsteklov: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
