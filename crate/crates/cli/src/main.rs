use std::process::ExitCode;

use bbdqc1_cli::args::Cli;
use bbdqc1_cli::{emit, run};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.global.output.as_deref();
    match run(&cli) {
        Ok(doc) => match emit(&doc, output) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("bbdqc1: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
        Err(e) => {
            if let Some(doc) = e.output() {
                let _ = emit(doc, output);
            }
            eprintln!("bbdqc1: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
