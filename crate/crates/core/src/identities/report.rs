use std::fmt;

use crate::symbolic::Expr;

/// How an instance must be decided to pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Canonical residual must be zero.
    Symbolic,
    /// Normalized sampled residual must stay below the tolerance.
    Numeric,
    /// Symbolic zero, falling back to sampling.
    #[default]
    Both,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Symbolic => "symbolic",
            Mode::Numeric => "numeric",
            Mode::Both => "both",
        }
    }

    pub fn from_name(s: &str) -> Option<Mode> {
        match s {
            "symbolic" => Some(Mode::Symbolic),
            "numeric" => Some(Mode::Numeric),
            "both" => Some(Mode::Both),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One identity at one concrete choice of free indices.
#[derive(Debug, Clone)]
pub struct Instance {
    pub identity: String,
    /// 0-based values of the free indices, in the identity's free-index order.
    pub index: Vec<usize>,
    pub residual: Expr,
    /// The summands whose sum is `residual`; sampled individually.
    pub terms: Vec<Expr>,
    pub symbolic_zero: bool,
    /// Largest normalized residual `|Σ t| / (1 + max |t|)` over the samples.
    pub max_abs_numeric: Option<f64>,
    pub samples_used: usize,
    pub domain_failure: bool,
}

impl Instance {
    pub fn new(identity: impl Into<String>, index: Vec<usize>, residual: Expr, terms: Vec<Expr>) -> Self {
        let symbolic_zero = residual.is_zero();
        Instance {
            identity: identity.into(),
            index,
            residual,
            terms,
            symbolic_zero,
            max_abs_numeric: None,
            samples_used: 0,
            domain_failure: false,
        }
    }

    pub fn passes(&self, mode: Mode, tol: f64) -> bool {
        let numeric_ok = !self.domain_failure && self.max_abs_numeric.is_some_and(|x| x < tol);
        match mode {
            Mode::Symbolic => self.symbolic_zero,
            Mode::Numeric => numeric_ok,
            Mode::Both => self.symbolic_zero || numeric_ok,
        }
    }

    /// 1-based rendering of the index tuple.
    pub fn index_label(&self) -> String {
        let parts: Vec<String> = self.index.iter().map(|i| (i + 1).to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

/// Residuals for a set of identity instances.
#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub instances: Vec<Instance>,
    pub seed: Option<u64>,
}

/// Aggregate numbers for one report under one criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub failed: usize,
    pub symbolic_zero: usize,
    pub max_numeric: f64,
}

impl VerificationReport {
    pub fn push(&mut self, i: Instance) {
        self.instances.push(i);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.instances.extend(other.instances);
        if self.seed.is_none() {
            self.seed = other.seed;
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Sort by identity id (numeric ids in numeric order) then index tuple.
    pub fn sort(&mut self) {
        self.instances.sort_by(|a, b| id_key(&a.identity).cmp(&id_key(&b.identity)).then(a.index.cmp(&b.index)));
    }

    pub fn all_symbolic_zero(&self) -> bool {
        self.instances.iter().all(|i| i.symbolic_zero)
    }

    pub fn passed(&self, mode: Mode, tol: f64) -> bool {
        self.instances.iter().all(|i| i.passes(mode, tol))
    }

    pub fn failures(&self, mode: Mode, tol: f64) -> Vec<&Instance> {
        self.instances.iter().filter(|i| !i.passes(mode, tol)).collect()
    }

    /// Distinct identity ids with at least one failing instance.
    pub fn failing_ids(&self, mode: Mode, tol: f64) -> Vec<String> {
        let mut ids: Vec<String> = Vec::new();
        for i in self.failures(mode, tol) {
            if !ids.contains(&i.identity) {
                ids.push(i.identity.clone());
            }
        }
        ids.sort_by_key(|s| id_key(s));
        ids
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = Vec::new();
        for i in &self.instances {
            if !ids.contains(&i.identity) {
                ids.push(i.identity.clone());
            }
        }
        ids.sort_by_key(|s| id_key(s));
        ids
    }

    pub fn only(&self, id: &str) -> VerificationReport {
        VerificationReport {
            instances: self.instances.iter().filter(|i| i.identity == id).cloned().collect(),
            seed: self.seed,
        }
    }

    pub fn summary(&self, mode: Mode, tol: f64) -> Summary {
        Summary {
            total: self.instances.len(),
            failed: self.failures(mode, tol).len(),
            symbolic_zero: self.instances.iter().filter(|i| i.symbolic_zero).count(),
            max_numeric: self.instances.iter().filter_map(|i| i.max_abs_numeric).fold(0.0, f64::max),
        }
    }
}

fn id_key(s: &str) -> (String, u64, String) {
    let digits: String = s.chars().skip_while(|c| !c.is_ascii_digit()).take_while(|c| c.is_ascii_digit()).collect();
    let prefix: String = s.chars().take_while(|c| !c.is_ascii_digit()).collect();
    (prefix, digits.parse().unwrap_or(0), s.to_string())
}
