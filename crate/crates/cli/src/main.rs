use std::process::ExitCode;

use clap::Parser;

mod commands;
mod error;
mod manifest;

use commands::Command;
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "plltm", version, about = "Topic models for labeled multilingual corpora")]
struct Cli {
    /// Run every data-parallel loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(err) = configure_threads() {
        eprintln!("error: {err}");
        return ExitCode::from(2);
    }
    let exec = if cli.sequential {
        plltm::Execution::Sequential
    } else {
        plltm::Execution::Parallel
    };
    match commands::run(cli.command, exec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

/// Honors `PLLTM_THREADS` for the global worker pool.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("PLLTM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PLLTM_THREADS must be a positive integer, got `{value}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Data(e.into()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
