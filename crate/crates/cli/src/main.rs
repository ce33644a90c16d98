mod args;
mod commands;
mod error;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Format};
use commands::Outcome;
use error::CliError;

fn render(outcome: &Outcome, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Text => outcome.text.clone(),
        Format::Json => serde_json::to_string_pretty(&outcome.json)? + "\n",
    })
}

fn write_file(path: &std::path::Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be positive".into()));
        }
        // ignore a second initialization; the first pool wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let start = Instant::now();
    let (outcome, side) = commands::run(&cli.command, cli.seed)?;
    let body = render(&outcome, cli.format)?;
    match &cli.out {
        Some(path) => write_file(path, &body)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .map_err(|source| CliError::Io { path: "stdout".into(), source })?;
        }
    }
    for (path, value) in side {
        write_file(&path, &(serde_json::to_string_pretty(&value)? + "\n"))?;
    }
    if cli.timing {
        eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    }
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("jacverify: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
