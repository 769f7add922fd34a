//! Command-line front end: argument parsing, run configuration and emission
//! of CSV, JSON and SVG documents.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;
pub mod sampling;
pub mod svg;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use serde_json::Value;

use crate::args::{Cli, Command, Format, GlobalArgs, VerifyArgs};
use crate::commands::Outcome;
use crate::error::CliError;
use crate::report::Report;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "TAKAGI_THREADS";

/// Parses `argv`, runs the subcommand and returns the process exit code:
/// 0 on success, 1 when a verification fails or on I/O errors, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(text) = std::env::var(THREADS_ENV) {
        let n: usize = text
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {text:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Runtime(e.to_string()))
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let pool = thread_pool()?;
    let outcome = pool.install(|| dispatch(cli))?;
    let g = &cli.global;
    let document = match g.format {
        Format::Csv => outcome.report.to_csv()?,
        Format::Json => outcome.report.to_json()?,
        Format::Svg => outcome.svg.ok_or_else(|| CliError::Usage("no SVG rendering for this command".into()))?,
    };
    emit(g, &document, &outcome.report.summary)?;
    Ok(if outcome.report.passed { 0 } else { 1 })
}

fn emit(g: &GlobalArgs, document: &str, summary: &str) -> Result<(), CliError> {
    match &g.output {
        Some(path) => {
            std::fs::write(path, document)?;
            println!("{summary}");
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(document.as_bytes())?;
            out.flush()?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval(a) => commands::eval(a, g),
        Command::Levelset(a) => commands::levelset(a, g),
        Command::Localset(a) => commands::localset(a, g),
        Command::Omega(a) => commands::omega(a, g),
        Command::Measure(a) => commands::measure(a, g),
        Command::Dim(a) => commands::dim(a, g),
        Command::Verify(a) => verify_command(a, g),
    }
}

fn verify_command(a: &VerifyArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if g.format == Format::Svg {
        return Err(CliError::Usage("verify has no SVG rendering".into()));
    }
    let mut config = serde_json::Map::new();
    config.insert("suite".into(), serde_json::to_value(a.suite).unwrap_or(Value::Null));
    config.insert("samples".into(), Value::from(a.samples));
    config.insert("format".into(), serde_json::to_value(g.format).unwrap_or(Value::Null));
    config.insert("seed".into(), Value::from(g.seed));
    let mut report = Report::new("verify", config, vec!["suite", "check", "passed", "detail"]);
    let checks = verify::run_suites(a.suite, a.samples, g.seed);
    for c in &checks {
        report.passed &= c.passed;
        report.push(vec![Value::from(c.suite), Value::from(c.name), Value::from(c.passed), Value::from(c.detail.clone())]);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    report.summary = if failed.is_empty() {
        format!("verify: all {} checks passed (seed {})", checks.len(), g.seed)
    } else {
        format!("verify: {} of {} checks FAILED: {}", failed.len(), checks.len(), failed.join(", "))
    };
    Ok(Outcome { report, svg: None })
}
