//! JSON, plain-text and LaTeX renderings of a run.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::run::{CheckOutcome, RunOutcome};
use crate::tensor::DenseArray;

/// Failing instances listed per check in the JSON report.
pub const MAX_LISTED_FAILURES: usize = 50;

#[derive(Debug, Serialize)]
pub struct JsonReport {
    pub config_digest: String,
    pub seed: u64,
    pub mode: String,
    pub tol: f64,
    pub samples: usize,
    pub passed: bool,
    pub checks: Vec<JsonCheck>,
    /// The only non-deterministic part of the report.
    pub timing: JsonTiming,
}

#[derive(Debug, Serialize)]
pub struct JsonCheck {
    pub name: String,
    pub status: String,
    pub instances_total: usize,
    pub instances_failed: usize,
    pub symbolic_zero: usize,
    pub domain_failures: usize,
    /// `null` when nothing was sampled.
    pub max_numeric_residual: Option<f64>,
    pub error: Option<String>,
    pub failing_ids: Vec<String>,
    pub identities: Vec<JsonIdentity>,
    pub failing_instances: Vec<JsonInstance>,
}

#[derive(Debug, Serialize)]
pub struct JsonIdentity {
    pub id: String,
    pub total: usize,
    pub failed: usize,
    pub symbolic_zero: usize,
    pub max_numeric_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct JsonInstance {
    pub id: String,
    /// 1-based.
    pub index: String,
    pub residual: String,
    pub max_numeric_residual: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct JsonTiming {
    pub generated_at_unix: u64,
    pub checks_ms: Vec<(String, f64)>,
}

fn max_numeric(c: &CheckOutcome) -> Option<f64> {
    c.report
        .instances
        .iter()
        .filter(|i| i.samples_used > 0 && !i.domain_failure)
        .filter_map(|i| i.max_abs_numeric)
        .reduce(f64::max)
}

fn status(c: &CheckOutcome, out: &RunOutcome) -> &'static str {
    if c.error.is_some() {
        "error"
    } else if c.passed(out.mode, out.tol) {
        "pass"
    } else {
        "fail"
    }
}

pub fn json_report(out: &RunOutcome) -> JsonReport {
    let checks = out
        .checks
        .iter()
        .map(|c| {
            let r = &c.report;
            let fails = r.failures(out.mode, out.tol);
            let identities = r
                .ids()
                .into_iter()
                .map(|id| {
                    let sub = r.only(&id);
                    let s = sub.summary(out.mode, out.tol);
                    let sampled = sub.instances.iter().filter(|i| i.samples_used > 0).filter_map(|i| i.max_abs_numeric);
                    JsonIdentity {
                        id,
                        total: s.total,
                        failed: s.failed,
                        symbolic_zero: s.symbolic_zero,
                        max_numeric_residual: sampled.filter(|x| x.is_finite()).reduce(f64::max),
                    }
                })
                .collect();
            JsonCheck {
                name: c.check.name().to_string(),
                status: status(c, out).to_string(),
                instances_total: r.len(),
                instances_failed: fails.len(),
                symbolic_zero: r.instances.iter().filter(|i| i.symbolic_zero).count(),
                domain_failures: r.instances.iter().filter(|i| i.domain_failure).count(),
                max_numeric_residual: max_numeric(c),
                error: c.error.clone(),
                failing_ids: r.failing_ids(out.mode, out.tol),
                identities,
                failing_instances: fails
                    .iter()
                    .take(MAX_LISTED_FAILURES)
                    .map(|i| JsonInstance {
                        id: i.identity.clone(),
                        index: i.index_label(),
                        residual: i.residual.to_string(),
                        max_numeric_residual: i.max_abs_numeric.filter(|x| x.is_finite()),
                    })
                    .collect(),
            }
        })
        .collect();
    JsonReport {
        config_digest: out.config_digest.clone(),
        seed: out.seed,
        mode: out.mode.name().to_string(),
        tol: out.tol,
        samples: out.samples,
        passed: out.passed(),
        checks,
        timing: JsonTiming {
            generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            checks_ms: out.checks.iter().map(|c| (c.check.name().to_string(), c.elapsed.as_secs_f64() * 1e3)).collect(),
        },
    }
}

pub fn json_string(out: &RunOutcome) -> String {
    serde_json::to_string_pretty(&json_report(out)).expect("report serializes") + "\n"
}

pub fn text_summary(out: &RunOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "config {}  seed {}  mode {}  tol {:e}",
        &out.config_digest[..16.min(out.config_digest.len())],
        out.seed,
        out.mode,
        out.tol
    );
    for c in &out.checks {
        let r = &c.report;
        let st = status(c, out);
        let mut line = format!("{:<20} {:<5} ", c.check.name(), st.to_uppercase());
        if let Some(e) = &c.error {
            line.push_str(e);
        } else {
            let sum = r.summary(out.mode, out.tol);
            let _ = write!(line, "{}/{} passed, {} symbolic zero", sum.total - sum.failed, sum.total, sum.symbolic_zero);
            if let Some(x) = max_numeric(c) {
                let _ = write!(line, ", max numeric {x:.3e}");
            }
            let ids = r.failing_ids(out.mode, out.tol);
            if !ids.is_empty() {
                let _ = write!(line, "; failing: {}", ids.join(", "));
            }
        }
        let _ = writeln!(s, "{}", line.trim_end());
    }
    let _ = writeln!(s, "overall: {}", if out.passed() { "PASS" } else { "FAIL" });
    s
}

type Label = fn(&[usize]) -> String;

fn one(i: usize) -> usize {
    i + 1
}

const TORSION_LABELS: [Label; 9] = [
    |x| format!("T_{{{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[0])),
    |x| format!("T_{{{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[0])),
    |x| format!("P_{{{}({})}}^{{{}({})}}", one(x[1]), one(x[2]), one(x[0]), one(x[3])),
    |x| format!("P_{{({}){}({})}}^{{({})({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0]), one(x[4])),
    |x| format!("P_{{({}){}({})}}^{{({})({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0]), one(x[4])),
    |x| format!("R_{{({}){}{}}}^{{({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("R_{{({}){}{}}}^{{({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("R_{{({}){}{}}}^{{({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| {
        format!(
            "S_{{({})({})({})}}^{{({})({})({})}}",
            one(x[1]),
            one(x[2]),
            one(x[4]),
            one(x[0]),
            one(x[3]),
            one(x[5])
        )
    },
];

const CURVATURE_LABELS: [Label; 7] = [
    |x| format!("\\chi_{{{}{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("R_{{{}{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("R_{{{}{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("P_{{{}{}({})}}^{{{}({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0]), one(x[4])),
    |x| format!("R_{{{}{}{}}}^{{{}}}", one(x[1]), one(x[2]), one(x[3]), one(x[0])),
    |x| format!("P_{{{}{}({})}}^{{{}({})}}", one(x[1]), one(x[2]), one(x[3]), one(x[0]), one(x[4])),
    |x| format!("S_{{{}({})({})}}^{{{}({})({})}}", one(x[1]), one(x[2]), one(x[4]), one(x[0]), one(x[3]), one(x[5])),
];

fn latex_family(s: &mut String, arr: &DenseArray, label: Label) {
    let nonzero: Vec<_> = arr.indexed().into_iter().filter(|(_, e)| !e.is_zero()).collect();
    if nonzero.is_empty() {
        return;
    }
    let _ = writeln!(s, "\\begin{{align*}}");
    let last = nonzero.len() - 1;
    for (k, (idx, e)) in nonzero.iter().enumerate() {
        let _ = writeln!(s, "  {} &= {}{}", label(idx), e.to_latex(), if k < last { " \\\\" } else { "" });
    }
    let _ = writeln!(s, "\\end{{align*}}");
}

/// A standalone LaTeX document with the nonzero torsion and curvature
/// components and the check results.
pub fn latex_report(out: &RunOutcome) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\\documentclass{{article}}\n\\usepackage{{amsmath}}\n\\begin{{document}}");
    let _ = writeln!(s, "\\section*{{Torsion}}");
    if out.torsion.is_zero() {
        let _ = writeln!(s, "All torsion components vanish.");
    }
    for ((_, arr), label) in out.torsion.families().into_iter().zip(TORSION_LABELS) {
        latex_family(&mut s, arr, label);
    }
    let _ = writeln!(s, "\\section*{{Curvature}}");
    if out.curvature.is_zero() {
        let _ = writeln!(s, "All curvature components vanish.");
    }
    for ((_, arr), label) in out.curvature.families().into_iter().zip(CURVATURE_LABELS) {
        latex_family(&mut s, arr, label);
    }
    let _ = writeln!(s, "\\section*{{Checks}}\n\\begin{{tabular}}{{lrrl}}\ncheck & instances & failed & status \\\\ \\hline");
    for c in &out.checks {
        let _ = writeln!(
            s,
            "{} & {} & {} & {} \\\\",
            c.check.name(),
            c.report.len(),
            c.report.failures(out.mode, out.tol).len(),
            status(c, out)
        );
    }
    let _ = writeln!(s, "\\end{{tabular}}\n\\end{{document}}");
    s
}
