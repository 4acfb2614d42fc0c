use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cp2mub_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()) {
                eprintln!("error: cannot write to stdout: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
