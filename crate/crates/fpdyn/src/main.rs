use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use fpdyn::cli::{execute, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = execute(cli, &mut out);
    let _ = out.flush();
    match status {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::ValidationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
