use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qext::{run, Args, CliError, CliResult, RunConfig};

fn write_body(cfg: &RunConfig, body: &[u8]) -> CliResult<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => std::io::stdout()
            .write_all(body)
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main_inner() -> CliResult<bool> {
    let args = Args::parse();
    let cfg = RunConfig::from_args(&args)?;
    let outcome = run(&cfg)?;
    write_body(&cfg, &outcome.body)?;
    if cfg.out.is_some() {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
