use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use staircase_gaps::cli::{run, Cli};
use staircase_gaps::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = match run(cli, &mut out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Invalid(_) | Error::OutsideSection { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    };
    let _ = out.flush();
    status
}
