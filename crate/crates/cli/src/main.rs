//! `osci`: single-observation confidence intervals from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use crate::args::Cli;

const USAGE: u8 = 1;
const DOMAIN: u8 = 2;

/// Sizes the global rayon pool from `OSCI_THREADS`, if set.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("OSCI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("OSCI_THREADS `{raw}` is not a positive integer"))?;
    if n == 0 {
        bail!("OSCI_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE),
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(USAGE);
    }
    match commands::run(&cli).and_then(|r| output::emit(&r, cli.out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<osci_core::Error>().is_some() {
                ExitCode::from(DOMAIN)
            } else {
                ExitCode::from(USAGE)
            }
        }
    }
}
