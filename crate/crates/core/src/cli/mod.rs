//! Configuration files, run orchestration and report output.

pub mod config;
pub mod report;
pub mod run;

use std::io;

pub use config::{load_config, parse_checks, parse_config, Check, ConfigError, ConnectionSpec, RunConfig};
pub use report::{json_report, json_string, latex_report, text_summary};
pub use run::{config_digest, run, CheckOutcome, RunOutcome};

/// Run `cfg` and write every output file it names.
pub fn execute(cfg: &RunConfig) -> io::Result<RunOutcome> {
    let out = run(cfg);
    if let Some(p) = &cfg.report {
        std::fs::write(p, json_string(&out))?;
    }
    if let Some(p) = &cfg.summary {
        std::fs::write(p, text_summary(&out))?;
    }
    if let Some(p) = &cfg.latex {
        std::fs::write(p, latex_report(&out))?;
    }
    Ok(out)
}
