//! The coordinate chart `(t^a, x^i, p^a_i)`, metrics, Christoffel symbols,
//! nonlinear connections and the adapted derivations.
//!
//! Indices in this API are 0-based.

use std::collections::HashMap;

use thiserror::Error;

use crate::symbolic::{parse_with, CoordAssignment, Expr, ParseError, Rational, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("dimensions must be at least 1 (got m={m}, n={n})")]
    Dimension { m: usize, n: usize },
    #[error("coordinate name `{0}` is not a valid identifier")]
    BadName(String),
    #[error("coordinate name `{0}` is used twice")]
    DuplicateName(String),
}

/// The single chart on the dual jet space.
#[derive(Debug, Clone)]
pub struct JetChart {
    m: usize,
    n: usize,
    t: Vec<Symbol>,
    x: Vec<Symbol>,
    p: Vec<Symbol>,
    by_name: HashMap<String, Symbol>,
}

const RESERVED: [&str; 6] = ["sin", "cos", "tan", "exp", "log", "sqrt"];

impl JetChart {
    /// Chart with the default names `t1.., x1.., p1_1..`.
    pub fn new(m: usize, n: usize) -> Result<Self, ChartError> {
        let t = (1..=m).map(|a| format!("t{a}")).collect();
        let x = (1..=n).map(|i| format!("x{i}")).collect();
        Self::with_names(t, x)
    }

    /// Chart with custom base coordinate names; momenta are always `p{a}_{i}`.
    pub fn with_names(t_names: Vec<String>, x_names: Vec<String>) -> Result<Self, ChartError> {
        let (m, n) = (t_names.len(), x_names.len());
        if m == 0 || n == 0 {
            return Err(ChartError::Dimension { m, n });
        }
        let mut names = t_names;
        names.extend(x_names);
        for a in 1..=m {
            for i in 1..=n {
                names.push(format!("p{a}_{i}"));
            }
        }
        let mut by_name = HashMap::new();
        let mut syms = Vec::with_capacity(names.len());
        for (id, name) in names.iter().enumerate() {
            let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !RESERVED.contains(&name.as_str());
            if !valid {
                return Err(ChartError::BadName(name.clone()));
            }
            let s = Symbol::new(id as u32, name);
            if by_name.insert(name.clone(), s.clone()).is_some() {
                return Err(ChartError::DuplicateName(name.clone()));
            }
            syms.push(s);
        }
        let p = syms.split_off(m + n);
        let x = syms.split_off(m);
        Ok(JetChart { m, n, t: syms, x, p, by_name })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `m + n + m*n`.
    pub fn dim(&self) -> usize {
        self.m + self.n + self.m * self.n
    }

    pub fn t(&self, a: usize) -> &Symbol {
        &self.t[a]
    }

    pub fn x(&self, i: usize) -> &Symbol {
        &self.x[i]
    }

    pub fn p(&self, a: usize, i: usize) -> &Symbol {
        &self.p[a * self.n + i]
    }

    pub fn t_symbols(&self) -> &[Symbol] {
        &self.t
    }

    pub fn x_symbols(&self) -> &[Symbol] {
        &self.x
    }

    pub fn p_symbols(&self) -> &[Symbol] {
        &self.p
    }

    pub fn coordinates(&self) -> impl Iterator<Item = &Symbol> {
        self.t.iter().chain(&self.x).chain(&self.p)
    }

    pub fn lookup(&self, name: &str) -> Option<&Symbol> {
        self.by_name.get(name)
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr, ParseError> {
        parse_with(text, |name| self.lookup(name).cloned())
    }

    /// The sample point used for nondegeneracy spot checks.
    pub fn reference_point(&self) -> CoordAssignment {
        let mut a = CoordAssignment::new();
        for (k, s) in self.t.iter().chain(&self.x).enumerate() {
            a.set(s, 0.55 + 0.1 * k as f64);
        }
        for (k, s) in self.p.iter().enumerate() {
            a.set(s, 0.3 - 0.15 * k as f64);
        }
        a
    }
}

/// Parse an expression against the coordinates of `chart`.
pub fn parse_expr(text: &str, chart: &JetChart) -> Result<Expr, ParseError> {
    chart.parse_expr(text)
}

pub type Matrix = Vec<Vec<Expr>>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("metric must be {expected}x{expected}")]
    Shape { expected: usize },
    #[error("metric is not symmetric at [{row}][{col}]")]
    NotSymmetric { row: usize, col: usize },
    #[error("metric entry [{row}][{col}] depends on `{symbol}`")]
    ForeignSymbol { row: usize, col: usize, symbol: String },
    #[error("metric determinant is identically zero")]
    Singular,
    #[error("metric is degenerate at the reference point (det = {0})")]
    NumericallySingular(f64),
}

/// Exact determinant by cofactor expansion along the first row.
pub fn determinant(a: &[Vec<Expr>]) -> Expr {
    match a.len() {
        0 => Expr::one(),
        1 => a[0][0].clone(),
        2 => &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]),
        k => {
            let mut terms = Vec::with_capacity(k);
            for col in 0..k {
                if a[0][col].is_zero() {
                    continue;
                }
                let minor = minor(a, 0, col);
                let c = &a[0][col] * &determinant(&minor);
                terms.push(if col % 2 == 0 { c } else { -c });
            }
            Expr::sum(terms)
        }
    }
}

fn minor(a: &[Vec<Expr>], row: usize, col: usize) -> Matrix {
    a.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, v)| v.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Inverse via the adjugate; `None` if the determinant canonicalises to zero.
pub fn inverse(a: &[Vec<Expr>]) -> Option<Matrix> {
    let k = a.len();
    let inv_det = determinant(a).recip()?;
    let mut out = vec![vec![Expr::zero(); k]; k];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            // adj[r][c] = (-1)^(r+c) det(minor(c, r))
            let cof = if k == 1 { Expr::one() } else { determinant(&minor(a, c, r)) };
            let cof = if (r + c) % 2 == 0 { cof } else { -cof };
            *slot = &cof * &inv_det;
        }
    }
    Some(out)
}

fn validate_metric(
    chart: &JetChart,
    g: &[Vec<Expr>],
    dim: usize,
    allowed: &[Symbol],
) -> Result<Matrix, MetricError> {
    if g.len() != dim || g.iter().any(|r| r.len() != dim) {
        return Err(MetricError::Shape { expected: dim });
    }
    for (row, r) in g.iter().enumerate() {
        for (col, e) in r.iter().enumerate() {
            if *e != g[col][row] {
                return Err(MetricError::NotSymmetric { row, col });
            }
            if let Some(s) = e.free_symbols().into_iter().find(|s| !allowed.contains(s)) {
                return Err(MetricError::ForeignSymbol { row, col, symbol: s.name().to_string() });
            }
        }
    }
    let det = determinant(g);
    if det.is_zero() {
        return Err(MetricError::Singular);
    }
    match det.eval(&chart.reference_point()) {
        Ok(v) if v.abs() > 1e-12 => {}
        Ok(v) => return Err(MetricError::NumericallySingular(v)),
        Err(_) => return Err(MetricError::NumericallySingular(f64::NAN)),
    }
    inverse(g).ok_or(MetricError::Singular)
}

/// `h_ab(t)` together with its inverse.
#[derive(Debug, Clone)]
pub struct TemporalMetric {
    pub h: Matrix,
    pub h_inv: Matrix,
}

impl TemporalMetric {
    pub fn new(chart: &JetChart, h: Matrix) -> Result<Self, MetricError> {
        let h_inv = validate_metric(chart, &h, chart.m(), chart.t_symbols())?;
        Ok(TemporalMetric { h, h_inv })
    }

    pub fn identity(chart: &JetChart) -> Self {
        Self::new(chart, identity(chart.m())).expect("identity metric")
    }
}

/// `φ_ij(x)` together with its inverse.
#[derive(Debug, Clone)]
pub struct SpatialMetric {
    pub phi: Matrix,
    pub phi_inv: Matrix,
}

impl SpatialMetric {
    pub fn new(chart: &JetChart, phi: Matrix) -> Result<Self, MetricError> {
        let phi_inv = validate_metric(chart, &phi, chart.n(), chart.x_symbols())?;
        Ok(SpatialMetric { phi, phi_inv })
    }

    pub fn identity(chart: &JetChart) -> Self {
        Self::new(chart, identity(chart.n())).expect("identity metric")
    }
}

pub fn identity(k: usize) -> Matrix {
    (0..k).map(|r| (0..k).map(|c| if r == c { Expr::one() } else { Expr::zero() }).collect()).collect()
}

/// Dense rank-3 array `[a][b][c]` of expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct Array3 {
    dims: [usize; 3],
    data: Vec<Expr>,
}

impl Array3 {
    pub fn zeros(d0: usize, d1: usize, d2: usize) -> Self {
        Array3 { dims: [d0, d1, d2], data: vec![Expr::zero(); d0 * d1 * d2] }
    }

    pub fn from_fn(d0: usize, d1: usize, d2: usize, mut f: impl FnMut(usize, usize, usize) -> Expr) -> Self {
        let mut data = Vec::with_capacity(d0 * d1 * d2);
        for i in 0..d0 {
            for j in 0..d1 {
                for k in 0..d2 {
                    data.push(f(i, j, k));
                }
            }
        }
        Array3 { dims: [d0, d1, d2], data }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        assert!(i < self.dims[0] && j < self.dims[1] && k < self.dims[2], "index out of range");
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Expr {
        &self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, e: Expr) {
        let o = self.offset(i, j, k);
        self.data[o] = e;
    }

    pub fn iter(&self) -> impl Iterator<Item = &Expr> {
        self.data.iter()
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        Array3 { dims: self.dims, data: self.data.iter().map(f).collect() }
    }
}

/// Levi-Civita coefficients `Γ^a_{bc} = ½ g^{ad}(∂_c g_{db} + ∂_b g_{dc} − ∂_d g_{bc})`.
fn levi_civita(g: &[Vec<Expr>], g_inv: &[Vec<Expr>], coords: &[Symbol]) -> Array3 {
    let k = g.len();
    let dg: Vec<Vec<Vec<Expr>>> =
        coords.iter().map(|s| g.iter().map(|r| r.iter().map(|e| e.diff(s)).collect()).collect()).collect();
    let half = Rational::new(1, 2);
    Array3::from_fn(k, k, k, |a, b, c| {
        if c < b {
            return Expr::zero(); // filled by symmetry below
        }
        let terms = (0..k).filter(|&d| !g_inv[a][d].is_zero()).map(|d| {
            let bracket = Expr::sum([dg[c][d][b].clone(), dg[b][d][c].clone(), -&dg[d][b][c]]);
            &g_inv[a][d] * &bracket
        });
        Expr::sum(terms.collect::<Vec<_>>()).scale(&half)
    })
    .symmetrised_lower()
}

impl Array3 {
    fn symmetrised_lower(mut self) -> Self {
        let [d0, d1, _] = self.dims;
        for a in 0..d0 {
            for b in 0..d1 {
                for c in 0..b {
                    let v = self.get(a, c, b).clone();
                    self.set(a, b, c, v);
                }
            }
        }
        self
    }
}

/// `χ^a_{bc}` and `Γ^i_{jk}`.
#[derive(Debug, Clone)]
pub struct ChristoffelSymbols {
    pub chi: Array3,
    pub gamma: Array3,
}

pub fn christoffel_temporal(chart: &JetChart, h: &TemporalMetric) -> Array3 {
    levi_civita(&h.h, &h.h_inv, chart.t_symbols())
}

pub fn christoffel_spatial(chart: &JetChart, phi: &SpatialMetric) -> Array3 {
    levi_civita(&phi.phi, &phi.phi_inv, chart.x_symbols())
}

impl ChristoffelSymbols {
    pub fn new(chart: &JetChart, h: &TemporalMetric, phi: &SpatialMetric) -> Self {
        ChristoffelSymbols { chi: christoffel_temporal(chart, h), gamma: christoffel_spatial(chart, phi) }
    }
}

/// `N₁^{(a)}_{(i)b}` stored `[a][i][b]` and `N₂^{(a)}_{(i)j}` stored `[a][i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearConnection {
    pub n1: Array3,
    pub n2: Array3,
}

impl NonlinearConnection {
    pub fn zero(chart: &JetChart) -> Self {
        let (m, n) = (chart.m(), chart.n());
        NonlinearConnection { n1: Array3::zeros(m, n, m), n2: Array3::zeros(m, n, n) }
    }

    /// `N₁ = χ^a_{bc} p^c_i`, `N₂ = −Γ^k_{ij} p^a_k`.
    pub fn canonical(chart: &JetChart, chr: &ChristoffelSymbols) -> Self {
        let (m, n) = (chart.m(), chart.n());
        let n1 = Array3::from_fn(m, n, m, |a, i, b| {
            Expr::sum((0..m).map(|c| chr.chi.get(a, b, c) * &Expr::symbol(chart.p(c, i))).collect::<Vec<_>>())
        });
        let n2 = Array3::from_fn(m, n, n, |a, i, j| {
            -Expr::sum((0..n).map(|k| chr.gamma.get(k, i, j) * &Expr::symbol(chart.p(a, k))).collect::<Vec<_>>())
        });
        NonlinearConnection { n1, n2 }
    }

    /// `δe/δt^a = ∂e/∂t^a − N₁^{(b)}_{(j)a} ∂e/∂p^b_j`.
    pub fn delta_dt(&self, chart: &JetChart, e: &Expr, a: usize) -> Expr {
        let mut parts = vec![e.diff(chart.t(a))];
        for b in 0..chart.m() {
            for j in 0..chart.n() {
                let coef = self.n1.get(b, j, a);
                if coef.is_zero() {
                    continue;
                }
                let d = e.diff(chart.p(b, j));
                if !d.is_zero() {
                    parts.push(-(coef * &d));
                }
            }
        }
        Expr::sum(parts)
    }

    /// `δe/δx^i = ∂e/∂x^i − N₂^{(b)}_{(j)i} ∂e/∂p^b_j`.
    pub fn delta_dx(&self, chart: &JetChart, e: &Expr, i: usize) -> Expr {
        let mut parts = vec![e.diff(chart.x(i))];
        for b in 0..chart.m() {
            for j in 0..chart.n() {
                let coef = self.n2.get(b, j, i);
                if coef.is_zero() {
                    continue;
                }
                let d = e.diff(chart.p(b, j));
                if !d.is_zero() {
                    parts.push(-(coef * &d));
                }
            }
        }
        Expr::sum(parts)
    }
}

pub fn canonical_nonlinear_connection(chr: &ChristoffelSymbols, chart: &JetChart) -> NonlinearConnection {
    NonlinearConnection::canonical(chart, chr)
}

pub fn delta_dt(chart: &JetChart, e: &Expr, a: usize, n: &NonlinearConnection) -> Expr {
    n.delta_dt(chart, e, a)
}

pub fn delta_dx(chart: &JetChart, e: &Expr, i: usize, n: &NonlinearConnection) -> Expr {
    n.delta_dx(chart, e, i)
}
