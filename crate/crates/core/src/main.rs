use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dualjet::cli::{execute, load_config, parse_checks, text_summary};
use dualjet::identities::Mode;

/// Verify torsion, curvature, Ricci, deflection and Bianchi identities for an
/// h-normal connection described by a config file.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Check to run; repeat to select several. Overrides the config.
    #[arg(long = "check", value_name = "NAME")]
    checks: Vec<String>,
    #[arg(long, value_parser = ["symbolic", "numeric", "both"])]
    mode: Option<String>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    latex: Option<PathBuf>,
    /// Plain-text summary path.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Do not print the summary to stdout.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut cfg = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if !args.checks.is_empty() {
        let names: Vec<&str> = args.checks.iter().map(String::as_str).collect();
        match parse_checks(&names) {
            Ok(c) => cfg.checks = c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(m) = &args.mode {
        cfg.mode = Mode::from_name(m).expect("clap restricts values");
    }
    cfg.tol = args.tol.unwrap_or(cfg.tol);
    cfg.samples = args.samples.unwrap_or(cfg.samples);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.report = args.report.or(cfg.report);
    cfg.latex = args.latex.or(cfg.latex);
    cfg.summary = args.summary.or(cfg.summary);
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    };
    if !args.quiet {
        print!("{}", text_summary(&out));
    }
    ExitCode::from(out.exit_code() as u8)
}
