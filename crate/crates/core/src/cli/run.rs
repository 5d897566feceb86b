use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::config::{Check, RunConfig};
use crate::chart::JetChart;
use crate::connections::{verify_normalization, HNormalConnection};
use crate::identities::{
    liouville_field, numeric_verify, sample_fields, Instance, Mode, Sampling, VerificationReport, Verifier,
};
use crate::tensor::DenseArray;
use crate::torsion_curvature::{
    curvature_closed_form, curvature_from_definition, torsion_closed_form, torsion_from_definition, CurvatureComponents,
    TorsionComponents,
};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub check: Check,
    pub report: VerificationReport,
    /// Set when the check could not run at all, e.g. identity suites on a
    /// connection that is not of Cartan type.
    pub error: Option<String>,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self, mode: Mode, tol: f64) -> bool {
        self.error.is_none() && self.report.passed(mode, tol)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config_digest: String,
    pub seed: u64,
    pub mode: Mode,
    pub tol: f64,
    pub samples: usize,
    pub checks: Vec<CheckOutcome>,
    pub torsion: TorsionComponents,
    pub curvature: CurvatureComponents,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed(self.mode, self.tol))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, c: Check) -> Option<&CheckOutcome> {
        self.checks.iter().find(|o| o.check == c)
    }
}

/// SHA-256 of the canonical config text with output paths removed.
pub fn config_digest(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.report = None;
    c.latex = None;
    c.summary = None;
    let d = Sha256::digest(c.to_config_string().as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// Run the selected checks in dependency order. A planted perturbation is
/// seen by every derivative; the closed-form tables stay those of the
/// unperturbed connection.
pub fn run(cfg: &RunConfig) -> RunOutcome {
    let chart = cfg.chart();
    let hn = cfg.connection(&chart);
    let effective = match &cfg.perturbation {
        Some(p) => hn.perturbed(p).expect("config only perturbs A, H or C"),
        None => hn.clone(),
    };
    let torsion = torsion_closed_form(&chart, &hn);
    let curvature = curvature_closed_form(&chart, &hn);
    let sampling = Sampling { samples: cfg.samples, seed: cfg.seed, force: cfg.mode == Mode::Numeric, ..Sampling::default() };

    let mut checks = Vec::new();
    for &check in &cfg.checks {
        let start = Instant::now();
        let (report, error) = match run_check(check, cfg, &chart, &hn, &effective, &torsion, &curvature) {
            Ok(r) => (r, None),
            Err(e) => (VerificationReport::default(), Some(e)),
        };
        let mut report = if cfg.mode == Mode::Symbolic { report } else { numeric_verify(&report, &chart, &sampling) };
        report.seed = Some(cfg.seed);
        checks.push(CheckOutcome { check, report, error, elapsed: start.elapsed() });
    }
    RunOutcome {
        config_digest: config_digest(cfg),
        seed: cfg.seed,
        mode: cfg.mode,
        tol: cfg.tol,
        samples: cfg.samples,
        checks,
        torsion,
        curvature,
    }
}

fn run_check(
    check: Check,
    cfg: &RunConfig,
    chart: &JetChart,
    hn: &HNormalConnection,
    effective: &HNormalConnection,
    torsion: &TorsionComponents,
    curvature: &CurvatureComponents,
) -> Result<VerificationReport, String> {
    let verifier = || -> Result<Verifier, String> {
        let v = Verifier::new(chart, hn).map_err(|e| e.to_string())?;
        match &cfg.perturbation {
            Some(p) => v.with_perturbation(p).map_err(|e| e.to_string()),
            None => Ok(v),
        }
    };
    Ok(match check {
        Check::Normalization => verify_normalization(chart, effective),
        Check::OracleEquivalence => {
            let conn = effective.complete();
            let td = torsion_from_definition(chart, &conn);
            let cd = curvature_from_definition(chart, &conn);
            let mut r = VerificationReport::default();
            for ((name, a), (_, b)) in torsion.families().into_iter().zip(td.components.families()) {
                compare("oracle.torsion", name, a, b, &mut r);
            }
            for ((name, a), (_, b)) in curvature.families().into_iter().zip(cd.components.families()) {
                compare("oracle.curvature", name, a, b, &mut r);
            }
            for (idx, e) in td.structural_mismatches.iter().chain(&cd.structural_mismatches) {
                r.push(Instance::new("oracle.structure", idx.clone(), e.clone(), vec![e.clone()]));
            }
            r
        }
        Check::Torsion => torsion.antisymmetry_residuals(),
        Check::Curvature => curvature.antisymmetry_residuals(),
        Check::Ricci => {
            let v = verifier()?;
            let mut fields = vec![liouville_field(chart)];
            fields.extend(sample_fields(chart, cfg.fields));
            let mut r = VerificationReport::default();
            for (k, x) in fields.iter().enumerate() {
                let mut part = v.ricci(x).map_err(|e| e.to_string())?;
                for i in &mut part.instances {
                    i.identity = format!("{}:X{k}", i.identity);
                }
                r.extend(part);
            }
            r
        }
        Check::Deflection => {
            let v = verifier()?;
            let mut r = v.deflection_consistency();
            r.extend(v.deflection());
            r
        }
        Check::Bianchi => verifier()?.bianchi(None).map_err(|e| e.to_string())?,
    })
}

fn compare(prefix: &str, name: &str, closed: &DenseArray, def: &DenseArray, out: &mut VerificationReport) {
    for (idx, e) in closed.indexed() {
        let terms = vec![e.clone(), -def.get(&idx)];
        out.push(Instance::new(format!("{prefix}.{name}"), idx, crate::symbolic::Expr::sum(terms.clone()), terms));
    }
}
