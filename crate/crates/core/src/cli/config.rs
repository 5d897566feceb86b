//! Run configuration files.
//!
//! ```text
//! # unit sphere, one time
//! [manifold]
//! time = t
//! space = theta, phi
//!
//! [temporal_metric]
//! h[1][1] = 1
//!
//! [spatial_metric]
//! phi[1][1] = 1
//! phi[2][2] = sin(theta)^2
//!
//! [connection]
//! kind = berwald
//! perturb H[1][2][2] = 1
//!
//! [verify]
//! checks = all
//! mode = both
//! tol = 1e-9
//! samples = 100
//! seed = 0
//! ```
//!
//! `[manifold]` takes either `time`/`space` name lists or `m`/`n` counts
//! (default names `t1.. x1..`). Metric entries are 1-based; an entry given
//! only above or below the diagonal is mirrored, missing off-diagonal
//! entries are zero, and every diagonal entry is required.
//!
//! `[connection]` keys:
//! * `kind = berwald | explicit | random-cartan`
//! * `explicit`: `A[i][j][c]`, `H[i][j][k]`, `C[i][j][c][k]` for
//!   `A^i_{jc}`, `H^i_{jk}`, `C^{i(k)}_{j(c)}`; omitted entries are zero.
//!   The nonlinear connection is the canonical one of the metric pair.
//! * `random-cartan`: `seed`, `degree`, `terms`, `coeff_bound`, `density`.
//! * `perturb X[..] = q` adds the rational `q` to one entry of `A`, `H` or `C`
//!   in the same layout.
//!
//! `[verify]` keys: `checks` (comma list or `all`), `mode`, `tol`,
//! `samples`, `seed`, `fields` (number of extra Ricci test fields),
//! `report`, `latex`, `summary`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::chart::{christoffel_temporal, ChristoffelSymbols, JetChart, Matrix, NonlinearConnection, SpatialMetric, TemporalMetric};
use crate::connections::{berwald_connection, Block, HNormalConnection, Perturbation, RandomCartan};
use crate::identities::Mode;
use crate::symbolic::{Expr, ParseError, Rational};
use crate::tensor::DenseArray;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: `{field}` uses undeclared coordinate `{name}`")]
    UnknownCoordinate { field: String, name: String, line: usize, column: usize },
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), message: message.into() }
}

/// A verification check, listed in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    Normalization,
    OracleEquivalence,
    Torsion,
    Curvature,
    Ricci,
    Deflection,
    Bianchi,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Normalization,
        Check::OracleEquivalence,
        Check::Torsion,
        Check::Curvature,
        Check::Ricci,
        Check::Deflection,
        Check::Bianchi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Normalization => "normalization",
            Check::OracleEquivalence => "oracle-equivalence",
            Check::Torsion => "torsion",
            Check::Curvature => "curvature",
            Check::Ricci => "ricci",
            Check::Deflection => "deflection",
            Check::Bianchi => "bianchi",
        }
    }

    pub fn from_name(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Parse a comma list of check names (or `all`) into sorted, deduplicated
/// execution order.
pub fn parse_checks(list: &[&str]) -> Result<Vec<Check>, String> {
    let mut out = Vec::new();
    for s in list {
        let s = s.trim();
        if s == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(Check::from_name(s).ok_or_else(|| format!("unknown check `{s}`"))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionSpec {
    Berwald,
    /// Effective blocks; `a [i][j][c]`, `h [i][j][k]`, `c [i][j][c][k]`.
    Explicit { a: DenseArray, h: DenseArray, c: DenseArray },
    RandomCartan(RandomCartan),
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub time: Vec<String>,
    pub space: Vec<String>,
    pub h: Matrix,
    pub phi: Matrix,
    pub connection: ConnectionSpec,
    pub perturbation: Option<Perturbation>,
    pub checks: Vec<Check>,
    pub mode: Mode,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Extra polynomial fields for the Ricci check, on top of the Liouville field.
    pub fields: usize,
    pub report: Option<PathBuf>,
    pub latex: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl RunConfig {
    pub fn chart(&self) -> JetChart {
        JetChart::with_names(self.time.clone(), self.space.clone()).expect("validated names")
    }

    pub fn temporal_metric(&self, chart: &JetChart) -> TemporalMetric {
        TemporalMetric::new(chart, self.h.clone()).expect("validated metric")
    }

    pub fn spatial_metric(&self, chart: &JetChart) -> SpatialMetric {
        SpatialMetric::new(chart, self.phi.clone()).expect("validated metric")
    }

    /// The unperturbed connection.
    pub fn connection(&self, chart: &JetChart) -> HNormalConnection {
        let h = self.temporal_metric(chart);
        let phi = self.spatial_metric(chart);
        match &self.connection {
            ConnectionSpec::Berwald => berwald_connection(&h, &phi, chart),
            ConnectionSpec::RandomCartan(r) => r.generate(chart, &h),
            ConnectionSpec::Explicit { a, h: hs, c } => {
                let chr = ChristoffelSymbols::new(chart, &h, &phi);
                HNormalConnection {
                    chi: christoffel_temporal(chart, &h),
                    h,
                    a: a.clone(),
                    h_s: hs.clone(),
                    c: c.clone(),
                    nl: NonlinearConnection::canonical(chart, &chr),
                }
            }
        }
    }

    /// The config in canonical textual form; `parse_config` reads it back
    /// to an equal value.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[manifold]");
        let _ = writeln!(s, "time = {}", self.time.join(", "));
        let _ = writeln!(s, "space = {}", self.space.join(", "));
        let _ = writeln!(s, "\n[temporal_metric]");
        write_matrix(&mut s, "h", &self.h);
        let _ = writeln!(s, "\n[spatial_metric]");
        write_matrix(&mut s, "phi", &self.phi);
        let _ = writeln!(s, "\n[connection]");
        match &self.connection {
            ConnectionSpec::Berwald => {
                let _ = writeln!(s, "kind = berwald");
            }
            ConnectionSpec::RandomCartan(r) => {
                let _ = writeln!(s, "kind = random-cartan");
                let _ = writeln!(s, "seed = {}", r.seed);
                let _ = writeln!(s, "degree = {}", r.degree);
                let _ = writeln!(s, "terms = {}", r.terms);
                let _ = writeln!(s, "coeff_bound = {}", r.coeff_bound);
                let _ = writeln!(s, "density = {:?}", r.density);
            }
            ConnectionSpec::Explicit { a, h, c } => {
                let _ = writeln!(s, "kind = explicit");
                for (name, arr) in [("A", a), ("H", h), ("C", c)] {
                    for (idx, e) in arr.indexed() {
                        if !e.is_zero() {
                            let _ = writeln!(s, "{name}{} = {e}", bracket(&idx));
                        }
                    }
                }
            }
        }
        if let Some(p) = &self.perturbation {
            let _ = writeln!(s, "perturb {}{} = {}", effective_name(p.block), bracket(&p.index), p.delta);
        }
        let _ = writeln!(s, "\n[verify]");
        let checks: Vec<&str> = self.checks.iter().map(|c| c.name()).collect();
        let _ = writeln!(s, "checks = {}", checks.join(", "));
        let _ = writeln!(s, "mode = {}", self.mode);
        let _ = writeln!(s, "tol = {:?}", self.tol);
        let _ = writeln!(s, "samples = {}", self.samples);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "fields = {}", self.fields);
        for (k, v) in [("report", &self.report), ("latex", &self.latex), ("summary", &self.summary)] {
            if let Some(p) = v {
                let _ = writeln!(s, "{k} = {}", p.display());
            }
        }
        s
    }
}

fn write_matrix(s: &mut String, name: &str, m: &Matrix) {
    for (r, row) in m.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            if c >= r && (!e.is_zero() || c == r) {
                let _ = writeln!(s, "{name}[{}][{}] = {e}", r + 1, c + 1);
            }
        }
    }
}

fn bracket(idx: &[usize]) -> String {
    idx.iter().map(|i| format!("[{}]", i + 1)).collect()
}

fn effective_name(b: Block) -> &'static str {
    match b {
        Block::As => "A",
        Block::Hs => "H",
        _ => "C",
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_config(&text)
}

/// One `key = value` line, with 1-based positions.
#[derive(Debug, Clone)]
struct Entry {
    key: String,
    value: String,
    line: usize,
    value_col: usize,
}

const SECTIONS: [&str; 5] = ["manifold", "temporal_metric", "spatial_metric", "connection", "verify"];

fn split_lines(text: &str) -> Result<Vec<(usize, Entry)>, ConfigError> {
    let mut section: Option<usize> = None;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = body.chars().take_while(|c| c.is_whitespace()).count() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or(ConfigError::Syntax {
                line,
                column: indent + trimmed.chars().count(),
                message: "expected `]` closing the section header".into(),
            })?;
            section = Some(SECTIONS.iter().position(|s| *s == name.trim()).ok_or_else(|| ConfigError::Syntax {
                line,
                column: indent + 1,
                message: format!("unknown section `{}`", name.trim()),
            })?);
            continue;
        }
        let Some(sec) = section else {
            return Err(ConfigError::Syntax { line, column: indent, message: "entry before any section header".into() });
        };
        let Some(eq) = body.find('=') else {
            return Err(ConfigError::Syntax {
                line,
                column: indent + trimmed.chars().count(),
                message: "expected `key = value`".into(),
            });
        };
        let key = body[..eq].trim().to_string();
        let after = &body[eq + 1..];
        let value = after.trim().to_string();
        let lead = after.chars().take_while(|c| c.is_whitespace()).count();
        let value_col = body[..eq].chars().count() + 2 + lead;
        if key.is_empty() {
            return Err(ConfigError::Syntax { line, column: indent, message: "missing key".into() });
        }
        if value.is_empty() {
            return Err(ConfigError::Syntax { line, column: value_col, message: format!("missing value for `{key}`") });
        }
        out.push((sec, Entry { key, value, line, value_col }));
    }
    Ok(out)
}

/// `name[1][2]...` with 1-based indices, returned 0-based.
fn indexed_key(e: &Entry) -> Result<Option<(String, Vec<usize>)>, ConfigError> {
    let Some(open) = e.key.find('[') else {
        return Ok(None);
    };
    let name = e.key[..open].trim().to_string();
    let mut idx = Vec::new();
    let mut rest = &e.key[open..];
    while !rest.is_empty() {
        let bad = || ConfigError::Syntax { line: e.line, column: 1, message: format!("malformed index in `{}`", e.key) };
        let inner = rest.strip_prefix('[').ok_or_else(bad)?;
        let close = inner.find(']').ok_or_else(bad)?;
        let k: usize = inner[..close].trim().parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(invalid(&e.key, "indices start at 1"));
        }
        idx.push(k - 1);
        rest = inner[close + 1..].trim_start();
    }
    Ok(Some((name, idx)))
}

fn parse_expr_at(chart: &JetChart, e: &Entry, field: &str) -> Result<Expr, ConfigError> {
    chart.parse_expr(&e.value).map_err(|err| {
        let column = |off: usize| e.value_col + e.value[..off.min(e.value.len())].chars().count();
        match err {
            ParseError::UnknownIdentifier { name, offset } => {
                ConfigError::UnknownCoordinate { field: field.into(), name, line: e.line, column: column(offset) }
            }
            ParseError::Syntax { offset, message } => {
                ConfigError::Syntax { line: e.line, column: column(offset), message }
            }
            ParseError::ZeroDivision => {
                ConfigError::Syntax { line: e.line, column: e.value_col, message: "division by zero".into() }
            }
        }
    })
}

fn parse_num<T: std::str::FromStr>(e: &Entry) -> Result<T, ConfigError> {
    e.value.parse().map_err(|_| invalid(&e.key, format!("cannot parse `{}`", e.value)))
}

fn names(e: &Entry) -> Vec<String> {
    e.value.split(',').map(|s| s.trim().to_string()).collect()
}

fn default_names(prefix: char, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn read_matrix(chart: &JetChart, entries: &[&Entry], name: &str, dim: usize) -> Result<Matrix, ConfigError> {
    let mut given: Vec<Vec<Option<Expr>>> = vec![vec![None; dim]; dim];
    for e in entries {
        let (key, idx) = indexed_key(e)?.ok_or_else(|| invalid(&e.key, format!("expected `{name}[r][c]`")))?;
        if key != name || idx.len() != 2 {
            return Err(invalid(&e.key, format!("expected `{name}[r][c]`")));
        }
        if idx[0] >= dim || idx[1] >= dim {
            return Err(invalid(&e.key, format!("index out of range for dimension {dim}")));
        }
        if given[idx[0]][idx[1]].is_some() {
            return Err(invalid(&e.key, "given twice"));
        }
        given[idx[0]][idx[1]] = Some(parse_expr_at(chart, e, &e.key)?);
    }
    let mut out = vec![vec![Expr::zero(); dim]; dim];
    for r in 0..dim {
        for c in 0..dim {
            out[r][c] = match (&given[r][c], &given[c][r]) {
                (Some(x), _) | (None, Some(x)) => x.clone(),
                (None, None) if r == c => return Err(invalid(format!("{name}[{}][{}]", r + 1, c + 1), "diagonal entry missing")),
                (None, None) => Expr::zero(),
            };
        }
    }
    Ok(out)
}

/// Parse and validate configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let entries = split_lines(text)?;
    let in_section = |s: usize| entries.iter().filter(move |(k, _)| *k == s).map(|(_, e)| e);

    let mut time = None;
    let mut space = None;
    let (mut m, mut n) = (None, None);
    for e in in_section(0) {
        match e.key.as_str() {
            "time" => time = Some(names(e)),
            "space" => space = Some(names(e)),
            "m" => m = Some(parse_num::<usize>(e)?),
            "n" => n = Some(parse_num::<usize>(e)?),
            _ => return Err(invalid(&e.key, "unknown key in [manifold]")),
        }
    }
    let time = match (time, m) {
        (Some(t), Some(m)) if t.len() != m => return Err(invalid("m", "does not match the number of time names")),
        (Some(t), _) => t,
        (None, Some(m)) => default_names('t', m),
        (None, None) => return Err(invalid("manifold", "give `time` or `m`")),
    };
    let space = match (space, n) {
        (Some(s), Some(n)) if s.len() != n => return Err(invalid("n", "does not match the number of space names")),
        (Some(s), _) => s,
        (None, Some(n)) => default_names('x', n),
        (None, None) => return Err(invalid("manifold", "give `space` or `n`")),
    };
    let chart = JetChart::with_names(time.clone(), space.clone()).map_err(|e| invalid("manifold", e.to_string()))?;
    let (m, n) = (chart.m(), chart.n());

    let h_entries: Vec<&Entry> = in_section(1).collect();
    let h = read_matrix(&chart, &h_entries, "h", m)?;
    TemporalMetric::new(&chart, h.clone()).map_err(|e| invalid("temporal_metric", e.to_string()))?;
    let phi_entries: Vec<&Entry> = in_section(2).collect();
    let phi = read_matrix(&chart, &phi_entries, "phi", n)?;
    SpatialMetric::new(&chart, phi.clone()).map_err(|e| invalid("spatial_metric", e.to_string()))?;

    let mut kind = None;
    let mut random = RandomCartan::default();
    let mut random_keys = false;
    let mut a = DenseArray::zeros(&[n, n, m]);
    let mut hs = DenseArray::zeros(&[n, n, n]);
    let mut c = DenseArray::zeros(&[n, n, m, n]);
    let mut explicit_keys = false;
    let mut perturbation = None;
    for e in in_section(3) {
        if let Some(rest) = e.key.strip_prefix("perturb ") {
            let fake = Entry { key: rest.trim().to_string(), ..e.clone() };
            let (name, idx) = indexed_key(&fake)?.ok_or_else(|| invalid(&e.key, "expected `perturb X[..]`"))?;
            let block = match name.as_str() {
                "A" => Block::As,
                "H" => Block::Hs,
                "C" => Block::Cs,
                _ => return Err(invalid(&e.key, "only A, H or C can be perturbed")),
            };
            check_shape(&e.key, &idx, &block.shape(m, n))?;
            let delta = parse_rational(&e.value).ok_or_else(|| invalid(&e.key, "expected a rational number"))?;
            if perturbation.is_some() {
                return Err(invalid(&e.key, "only one perturbation is supported"));
            }
            perturbation = Some(Perturbation { block, index: idx, delta });
            continue;
        }
        if let Some((name, idx)) = indexed_key(e)? {
            let arr = match name.as_str() {
                "A" => &mut a,
                "H" => &mut hs,
                "C" => &mut c,
                _ => return Err(invalid(&e.key, "unknown connection block")),
            };
            check_shape(&e.key, &idx, arr.dims())?;
            arr.set(&idx, parse_expr_at(&chart, e, &e.key)?);
            explicit_keys = true;
            continue;
        }
        match e.key.as_str() {
            "kind" => kind = Some(e.value.clone()),
            "seed" => random.seed = parse_num(e)?,
            "degree" => random.degree = parse_num(e)?,
            "terms" => random.terms = parse_num(e)?,
            "coeff_bound" => random.coeff_bound = parse_num(e)?,
            "density" => random.density = parse_num(e)?,
            _ => return Err(invalid(&e.key, "unknown key in [connection]")),
        }
        if e.key != "kind" {
            random_keys = true;
        }
    }
    let connection = match kind.as_deref().unwrap_or("berwald") {
        "berwald" => ConnectionSpec::Berwald,
        "explicit" => ConnectionSpec::Explicit { a, h: hs, c },
        "random-cartan" => {
            if !(0.0..=1.0).contains(&random.density) {
                return Err(invalid("density", "must lie in [0, 1]"));
            }
            if random.coeff_bound < 1 {
                return Err(invalid("coeff_bound", "must be at least 1"));
            }
            ConnectionSpec::RandomCartan(random)
        }
        other => return Err(invalid("kind", format!("unknown connection kind `{other}`"))),
    };
    if explicit_keys && !matches!(connection, ConnectionSpec::Explicit { .. }) {
        return Err(invalid("connection", "block entries need `kind = explicit`"));
    }
    if random_keys && !matches!(connection, ConnectionSpec::RandomCartan(_)) {
        return Err(invalid("connection", "generator settings need `kind = random-cartan`"));
    }

    let mut cfg = RunConfig {
        time,
        space,
        h,
        phi,
        connection,
        perturbation,
        checks: Check::ALL.to_vec(),
        mode: Mode::Both,
        tol: 1e-9,
        samples: 100,
        seed: 0,
        fields: 3,
        report: None,
        latex: None,
        summary: None,
    };
    for e in in_section(4) {
        match e.key.as_str() {
            "checks" => {
                let list: Vec<&str> = e.value.split(',').collect();
                cfg.checks = parse_checks(&list).map_err(|m| invalid("checks", m))?;
            }
            "mode" => cfg.mode = Mode::from_name(&e.value).ok_or_else(|| invalid("mode", "expected symbolic, numeric or both"))?,
            "tol" => cfg.tol = parse_num(e)?,
            "samples" => cfg.samples = parse_num(e)?,
            "seed" => cfg.seed = parse_num(e)?,
            "fields" => cfg.fields = parse_num(e)?,
            "report" => cfg.report = Some(PathBuf::from(&e.value)),
            "latex" => cfg.latex = Some(PathBuf::from(&e.value)),
            "summary" => cfg.summary = Some(PathBuf::from(&e.value)),
            _ => return Err(invalid(&e.key, "unknown key in [verify]")),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    /// Checks the invariants that command-line overrides can break.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.checks.is_empty() {
            return Err(invalid("checks", "select at least one check"));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(invalid("tol", "must be positive"));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_shape(key: &str, idx: &[usize], dims: &[usize]) -> Result<(), ConfigError> {
    if idx.len() != dims.len() || idx.iter().zip(dims).any(|(i, d)| i >= d) {
        let want: Vec<String> = dims.iter().map(|d| format!("[1..{d}]")).collect();
        return Err(invalid(key, format!("expected indices {}", want.concat())));
    }
    Ok(())
}

fn parse_rational(s: &str) -> Option<Rational> {
    let chart = JetChart::new(1, 1).ok()?;
    let e = chart.parse_expr(s).ok()?;
    e.as_rational()
}
