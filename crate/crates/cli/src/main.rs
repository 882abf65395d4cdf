mod config;
mod limit;
mod moments;
mod report;
mod verify;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, Format, RunConfig, UsageError};
use report::{summarize, write_csv, write_json, Report, ReportRow};

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    // clap exits with status 2 on malformed flags, matching our usage code
    let cli = Cli::parse();
    let config = match &cli.command {
        Command::Moments(a) => RunConfig::from_moments(a),
        Command::Verify(a) => RunConfig::from_verify(a),
        Command::Limit(a) => RunConfig::from_limit(a),
    };
    let config = match config {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let (rows, factor_reports) = match &cli.command {
        Command::Moments(_) => (moments::run(&config), Vec::new()),
        Command::Verify(_) => {
            let out = verify::run(&config);
            (out.rows, out.factor_reports)
        }
        Command::Limit(_) => (limit::run(&config), Vec::new()),
    };

    if let Err(e) = emit(&config, &rows, factor_reports) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_FAILURE);
    }
    match rows.iter().find(|r| !r.passed()) {
        Some(bad) => {
            eprintln!(
                "first failing row: {} {} k={} n={} alpha={} q={}: {}",
                bad.family, bad.method, bad.k, bad.n, bad.alpha, bad.q, bad.status
            );
            ExitCode::from(EXIT_FAILURE)
        }
        None => ExitCode::SUCCESS,
    }
}

fn emit(config: &RunConfig, rows: &[ReportRow], factor_reports: Vec<String>) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match config.format {
        Format::Csv => {
            write_csv(rows, &mut out).map_err(io::Error::other)?;
            // the CSV table has no room for the fitted factors
            for r in &factor_reports {
                eprintln!("factor: {r}");
            }
        }
        Format::Json => {
            let summary = summarize(rows, factor_reports);
            write_json(&Report { config, rows, summary }, &mut out)?;
        }
    }
    out.flush()
}
