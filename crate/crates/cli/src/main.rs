use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use factorspace_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            let mut out = io::stdout().lock();
            // a closed pipe (`| head`) is not an error worth reporting
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("factorspace: {e}");
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            eprintln!("factorspace: {e}");
            ExitCode::from(2)
        }
    }
}
