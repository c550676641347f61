use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use nearquad_cli::{execute, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    if let Some(text) = &outcome.output {
        let written = match &outcome.path {
            Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            eprintln!("cannot write output: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    }
    if let Some(message) = &outcome.message {
        eprintln!("{message}");
    }
    ExitCode::from(outcome.code as u8)
}
