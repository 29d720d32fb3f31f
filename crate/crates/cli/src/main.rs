//! `susyxxz`: command-line front end.
//!
//! Exit codes: 0 when every check passed, 1 when a check or computation
//! failed, 2 for usage errors. `SUSYXXZ_THREADS` sets the worker count.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::Failure;

const THREADS_VAR: &str = "SUSYXXZ_THREADS";

/// Worker threads in use: 1 without the `parallel` feature.
pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, got {v:?}"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = output::emit(&cli.command, &outcome, cli.format, cli.output.as_deref()) {
        eprintln!("error: {e}");
        let usage = e.kind() == std::io::ErrorKind::InvalidInput;
        return ExitCode::from(if usage { 2 } else { 1 });
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        if let Some(failed) = outcome.body.get("failed").and_then(|f| f.as_array()) {
            for name in failed {
                eprintln!("failed: {}", name.as_str().unwrap_or_default());
            }
        }
        ExitCode::from(1)
    }
}
