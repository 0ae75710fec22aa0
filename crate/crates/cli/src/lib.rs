//! Experiment runner: resolves a config, dispatches to the numerics and
//! renders the result as CSV plus a JSON run report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod numbers;
pub mod report;
pub mod selftest;

use std::time::Instant;

pub use config::{resolve, Command, ExperimentConfig, RunOptions};
pub use error::{CliError, CliResult};
pub use report::{csv_body, RunReport, Table};

pub fn run(config: &ExperimentConfig) -> CliResult<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let mut ctx = commands::Ctx::new(config);
    let table = commands::run_command(&config.command, &mut ctx)?;
    let ok = match &config.command {
        Command::Selftest => table.summary_value("failed") == Some("0"),
        _ => true,
    };
    Ok(RunReport {
        command: config.command.name(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        config: serde_json::to_value(config)?,
        threads: triconfig::par::current_threads(),
        parallel: triconfig::par::is_parallel(),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        warnings: ctx.warnings,
        tolerances: triconfig::tolerances::listing().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        ok,
        table,
    })
}

/// Applies the process-level options. Call once, before [`run`].
pub fn apply_options(opts: &RunOptions) {
    if opts.sequential {
        triconfig::par::set_parallel(false);
    }
    if let Some(t) = opts.threads.filter(|&t| t > 0) {
        triconfig::par::configure_threads(t);
    }
}

/// Writes the CSV and report; returns the process exit code.
pub fn execute(config: &ExperimentConfig, opts: &RunOptions) -> u8 {
    apply_options(opts);
    let report = match run(config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let csv = report.to_csv();
    let written = match &config.output {
        Some(path) => std::fs::write(path, &csv).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output {e}");
        return 2;
    }
    if let Some(path) = &opts.report {
        let json = serde_json::to_string_pretty(&report).expect("report serialises");
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("error: cannot write report {}: {e}", path.display());
            return 2;
        }
    }
    if !opts.quiet {
        eprintln!(
            "{} finished in {:.3} s ({} rows, seed {})",
            report.command,
            report.elapsed_seconds,
            report.table.rows.len(),
            report.seed
        );
        for (k, v) in &report.table.summary {
            eprintln!("  {k} = {v}");
        }
        for w in &report.warnings {
            eprintln!("  warning: {w}");
        }
    }
    if report.ok {
        0
    } else {
        4
    }
}
