//! Command-line driver: synthesize, corrupt, denoise, score and convert
//! manifold-valued images stored as MVF files.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use report::{CliError, CliResult, Report};

const THREADS_ENV: &str = "MANIFOLD_TV_THREADS";

fn resolve_threads(flag: Option<usize>) -> CliResult<Option<usize>> {
    let threads = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(s) if !s.trim().is_empty() => Some(s.trim().parse().map_err(|_| {
                CliError::usage(format!("{THREADS_ENV}={s:?} is not a thread count"))
            })?),
            _ => None,
        },
    };
    if threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    Ok(threads)
}

fn run(cli: Cli, report: &mut Report) -> CliResult<()> {
    let threads = resolve_threads(cli.threads)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {threads:?} worker threads: {e}")))?;
    report.param("threads", pool.current_num_threads());
    pool.install(|| match &cli.command {
        Command::Synth(a) => commands::synth(a, report),
        Command::Noise(a) => commands::noise(a, report),
        Command::Denoise(a) => commands::denoise(a, report),
        Command::Metric(a) => commands::metric(a, report),
        Command::Convert(a) => commands::convert(a, report),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(report::EXIT_USAGE as u8),
            };
        }
    };
    let json = cli.json;
    let mut report = Report::new(cli.command.name());
    let outcome = run(cli, &mut report);
    if let Err(e) = &outcome {
        report.result("error", e.message.clone()).result("exit_code", e.code);
    }
    report.print(json);
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
