use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hkcontact::config::{parse_suites, RunConfig};
use hkcontact::numerics::DEFAULT_FD_STEP;
use hkcontact::report::{emit_report, Format};
use hkcontact::suites::{run, RunError};

/// Randomized identity checks for the 3-Sasakian sphere and its H-connection.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Cli {
    /// Quaternionic dimension: the sphere is S^(4n+3).
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 256)]
    samples: u32,
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    fd_step: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_closed: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,
    #[arg(long, default_value_t = 1e-5)]
    tol_deep: f64,
    /// Suite to run; repeatable. Defaults to all.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let suites = match parse_suites(&cli.suites) {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let config = RunConfig {
        n: cli.n,
        seed: cli.seed,
        samples: cli.samples,
        fd_step: cli.fd_step,
        tol_closed: cli.tol_closed,
        tol_fd: cli.tol_fd,
        tol_deep: cli.tol_deep,
        suites,
        report_path: cli.report.clone(),
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(RunError::Config(e)) => return usage(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    if let Err(e) = emit_report(&report, cli.format, cli.report.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    let s = report.summary;
    eprintln!("{} checks, {} passed, {} failed", s.total, s.passed, s.failed);
    for c in report.failures() {
        eprintln!("failed: {}", c.name);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn usage(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}
