use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::VerificationReport;
use crate::chart::JetChart;
use crate::symbolic::CoordAssignment;

/// Sampling parameters for numeric verification.
#[derive(Debug, Clone, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub base_range: (f64, f64),
    pub fiber_range: (f64, f64),
    pub max_retries: usize,
    /// Sample instances even when their residual is already symbolically zero.
    pub force: bool,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { samples: 100, seed: 0, base_range: (0.2, 1.2), fiber_range: (-1.0, 1.0), max_retries: 10, force: false }
    }
}

impl Sampling {
    pub fn point(&self, chart: &JetChart, rng: &mut ChaCha8Rng) -> CoordAssignment {
        let mut a = CoordAssignment::new();
        for s in chart.t_symbols().iter().chain(chart.x_symbols()) {
            a.set(s, rng.gen_range(self.base_range.0..self.base_range.1));
        }
        for s in chart.p_symbols() {
            a.set(s, rng.gen_range(self.fiber_range.0..self.fiber_range.1));
        }
        a
    }
}

/// Sample every instance's terms at `cfg.samples` points and record the
/// largest normalized residual `|Σ t| / (1 + max |t|)`.
///
/// Points are shared across instances and drawn from one seeded stream, so
/// the result does not depend on evaluation order. A point where some term
/// cannot be evaluated is redrawn up to `max_retries` times; after that the
/// instance is flagged with `domain_failure`.
pub fn numeric_verify(report: &VerificationReport, chart: &JetChart, cfg: &Sampling) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    // Each sample slot has a primary point plus its retry replacements.
    let points: Vec<Vec<CoordAssignment>> =
        (0..cfg.samples).map(|_| (0..=cfg.max_retries).map(|_| cfg.point(chart, &mut rng)).collect()).collect();
    let mut out = report.clone();
    out.seed = Some(cfg.seed);
    for inst in &mut out.instances {
        if inst.symbolic_zero && !cfg.force {
            inst.max_abs_numeric = Some(0.0);
            inst.samples_used = 0;
            continue;
        }
        let mut worst: f64 = 0.0;
        let mut used = 0;
        let mut failed = false;
        'slots: for slot in &points {
            for pt in slot {
                let mut sum = 0.0;
                let mut scale: f64 = 0.0;
                let mut ok = true;
                for t in &inst.terms {
                    match t.eval(pt) {
                        Ok(v) if v.is_finite() => {
                            sum += v;
                            scale = scale.max(v.abs());
                        }
                        _ => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    worst = worst.max(sum.abs() / (1.0 + scale));
                    used += 1;
                    continue 'slots;
                }
            }
            failed = true;
            break;
        }
        inst.max_abs_numeric = Some(if failed { f64::INFINITY } else { worst });
        inst.samples_used = used;
        inst.domain_failure = failed;
    }
    out
}
