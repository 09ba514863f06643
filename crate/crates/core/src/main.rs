use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use varietal::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let status = run(&cli, &mut out);
    let _ = out.flush();
    ExitCode::from(status as u8)
}
