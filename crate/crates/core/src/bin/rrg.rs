use std::io::{IsTerminal, Write};
use std::process::ExitCode;

use clap::Parser;
use rrg_core::cli::{execute, exit_code, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default = if cli.common.out.is_none() && std::io::stdout().is_terminal() {
        Format::Table
    } else {
        Format::Json
    };
    let outcome = match execute(&cli, default) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rrg: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().lock().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("rrg: cannot write output: {e}");
        return ExitCode::from(1);
    }
    if outcome.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
