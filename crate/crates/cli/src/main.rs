//! `ssfilt`: command-line front end for the smoothing-sharpening filter.
//!
//! Exit status 0 on success, 2 for invalid arguments or parameters, 1 for
//! file-system and codec failures. Outputs are only written on success.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use log::LevelFilter;

use crate::args::Cli;
use crate::error::CliResult;

fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn init_logging(cli: &Cli) {
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => LevelFilter::Error,
        (false, 0) => LevelFilter::Warn,
        (false, 1) => LevelFilter::Info,
        (false, _) => LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("SSFILT_LOG")
        .format_timestamp(None)
        .init();
}

fn init_threads(threads: usize) -> CliResult<()> {
    if threads == 0 {
        return Ok(());
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| error::CliError::usage(format!("`threads`: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    log::debug!("built without the parallel feature; ignoring {threads} threads");
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{}", e.render());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("ssfilt: {}", one_line(first));
            return ExitCode::from(2);
        }
    };
    init_logging(&cli);
    let result = init_threads(cli.threads).and_then(|_| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ssfilt: error: {}", one_line(&e.to_string()));
            ExitCode::from(e.exit_code())
        }
    }
}
