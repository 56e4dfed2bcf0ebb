use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use superforms_cli::app::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = run(&cli);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.text),
        None if out.status == Status::Error && !cli.json => std::io::stderr().write_all(out.text.as_bytes()),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("superforms: cannot write output: {}", e);
        return ExitCode::from(2);
    }
    ExitCode::from(out.code)
}
