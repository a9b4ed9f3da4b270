use clap::Parser;
use mathieu_rn::cli::{run, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &report.text),
        None => std::io::stdout().write_all(report.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if report.failures > 0 {
        eprintln!("{} check(s) failed", report.failures);
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
