use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use indist_cli::{render, run, Cli, EXIT_INVALID};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let report = match run(&cli, argv) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = render(&report, cli.output);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_INVALID as u8);
    }
    if report.exit_status != 0 {
        eprintln!("error: one or more checks failed (see report)");
    }
    ExitCode::from(report.exit_status as u8)
}
