//! Executable Ricci, deflection and Bianchi identities.
//!
//! The specialized identities are written in a small index notation
//! (see [`dsl`]) and evaluated against closed-form torsion and curvature,
//! with covariant derivatives taken in the connection's adapted frame. The
//! generic identities are evaluated over unified indices from the
//! definition-based torsion and curvature and serve as the oracle.

pub mod catalog;
pub mod dsl;
mod lazy;
mod numeric;
mod report;

use thiserror::Error;

use crate::chart::JetChart;
use crate::connections::{complete_hnormal, HNormalConnection, NLinearConnection, Perturbation};
use crate::frame::Frame;
use crate::symbolic::Expr;
use crate::tensor::{for_each_index, DenseArray};
use crate::torsion_curvature::{
    curvature_closed_form, curvature_entry, definition_curvature, definition_torsion, torsion_closed_form,
    torsion_entry, CurvatureComponents, TorsionComponents,
};

pub use dsl::{parse_identity, DslError, Identity, Kind};
pub use lazy::LazyTensor;
pub use numeric::{numeric_verify, Sampling};
pub use report::{Instance, Mode, Summary, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("the connection is not of Cartan type")]
    NotCartan,
    #[error("the perturbation targets block {0}, which is not an effective block")]
    BadPerturbation(&'static str),
    #[error("the vector field has {got} components, expected {expected}")]
    FieldShape { got: usize, expected: usize },
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("{0}")]
    Dsl(String),
}

/// `Δ^{(a)}_{(i)b}` `[a][i][b]`, `Δ^{(a)}_{(i)j}` `[a][i][j]`,
/// `ϑ^{(a)(j)}_{(i)(b)}` `[a][i][b][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflectionTensors {
    pub delta_t: DenseArray,
    pub delta_s: DenseArray,
    pub theta: DenseArray,
}

/// Closed forms of the deflection d-tensors.
pub fn deflection_tensors(chart: &JetChart, hn: &HNormalConnection) -> Result<DeflectionTensors, VerifyError> {
    if !hn.is_cartan() {
        return Err(VerifyError::NotCartan);
    }
    Ok(deflection_closed_form(chart, hn))
}

fn deflection_closed_form(chart: &JetChart, hn: &HNormalConnection) -> DeflectionTensors {
    let (m, n) = (chart.m(), chart.n());
    let p = |a: usize, i: usize| Expr::symbol(chart.p(a, i));
    DeflectionTensors {
        delta_t: DenseArray::from_fn(&[m, n, m], |x| {
            let (a, i, b) = (x[0], x[1], x[2]);
            let mut parts = vec![-hn.nl.n1.get(a, i, b)];
            for r in 0..n {
                parts.push(-(hn.a.get(&[r, i, b]) * &p(a, r)));
            }
            for f in 0..m {
                parts.push(hn.chi.get(a, f, b) * &p(f, i));
            }
            Expr::sum(parts)
        }),
        delta_s: DenseArray::from_fn(&[m, n, n], |x| {
            let (a, i, j) = (x[0], x[1], x[2]);
            let mut parts = vec![-hn.nl.n2.get(a, i, j)];
            for r in 0..n {
                parts.push(-(hn.h_s.get(&[r, i, j]) * &p(a, r)));
            }
            Expr::sum(parts)
        }),
        theta: DenseArray::from_fn(&[m, n, m, n], |x| {
            let (a, i, b, j) = (x[0], x[1], x[2], x[3]);
            let mut parts = Vec::new();
            if a == b && i == j {
                parts.push(Expr::one());
            }
            for r in 0..n {
                parts.push(-(hn.c.get(&[r, i, b, j]) * &p(a, r)));
            }
            Expr::sum(parts)
        }),
    }
}

/// Which torsion and curvature feed the specialized identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Source {
    /// Closed forms from the effective blocks of the (unperturbed) connection.
    #[default]
    ClosedForm,
    /// Definition-based, from the frame actually used for derivatives.
    Definition,
}

/// Evaluates identities for one Cartan-type h-normal connection.
///
/// A perturbation changes only the connection used by the covariant
/// derivatives; the closed-form torsion and curvature keep describing the
/// original connection. This is how planted faults surface.
#[derive(Debug, Clone)]
pub struct Verifier {
    chart: JetChart,
    hn: HNormalConnection,
    frame: Frame,
    torsion: TorsionComponents,
    curvature: CurvatureComponents,
    source: Source,
}

struct Ctx<'a> {
    m: usize,
    n: usize,
    torsion: LazyTensor<'a>,
    curvature: LazyTensor<'a>,
    def_torsion: LazyTensor<'a>,
    def_curvature: LazyTensor<'a>,
    field: Option<LazyTensor<'a>>,
    liouville: LazyTensor<'a>,
}

impl dsl::Tensors for Ctx<'_> {
    fn m(&self) -> usize {
        self.m
    }

    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, kind: Kind, idx: &[usize]) -> Expr {
        match kind {
            Kind::Torsion => self.torsion.get(idx),
            Kind::Curvature => self.curvature.get(idx),
            Kind::Field => self.field.as_ref().expect("identity needs a vector field").get(idx),
            Kind::Liouville => self.liouville.get(idx),
            Kind::B1 => b1(&self.torsion, &self.curvature, self.d(), idx[0], idx[1], idx[2], idx[3]),
            Kind::B2 => b2(&self.torsion, &self.curvature, self.d(), idx[0], idx[1], idx[2], idx[3], idx[4]),
        }
    }
}

impl Ctx<'_> {
    fn d(&self) -> usize {
        self.m + self.n + self.m * self.n
    }
}

/// `Σ_{PQS} { τ^F_{QS;P} − ρ^F_{PQS} + τ^G_{PQ} τ^F_{GS} }` with
/// `τ^F_{PQ} = 𝕋^F_{QP}` and `ρ^F_{PQS} = ℝ^F_{SQP}`.
#[allow(clippy::too_many_arguments)]
fn b1(t: &LazyTensor<'_>, r: &LazyTensor<'_>, d: usize, f: usize, p: usize, q: usize, s: usize) -> Expr {
    let mut parts = Vec::new();
    for (p, q, s) in [(p, q, s), (q, s, p), (s, p, q)] {
        parts.push(t.get(&[f, s, q, p]));
        parts.push(-r.get(&[f, s, q, p]));
        for g in 0..d {
            let a = t.get(&[g, q, p]);
            if a.is_zero() {
                continue;
            }
            parts.push(&a * &t.get(&[f, s, g]));
        }
    }
    Expr::sum(parts)
}

/// `Σ_{PQS} { ρ^F_{QSU;P} + τ^G_{PQ} ρ^F_{GSU} }`.
#[allow(clippy::too_many_arguments)]
fn b2(t: &LazyTensor<'_>, r: &LazyTensor<'_>, d: usize, f: usize, u: usize, p: usize, q: usize, s: usize) -> Expr {
    let mut parts = Vec::new();
    for (p, q, s) in [(p, q, s), (q, s, p), (s, p, q)] {
        parts.push(r.get(&[f, u, s, q, p]));
        for g in 0..d {
            let a = t.get(&[g, q, p]);
            if a.is_zero() {
                continue;
            }
            parts.push(&a * &r.get(&[f, u, s, g]));
        }
    }
    Expr::sum(parts)
}

impl Verifier {
    pub fn new(chart: &JetChart, hn: &HNormalConnection) -> Result<Self, VerifyError> {
        if !hn.is_cartan() {
            return Err(VerifyError::NotCartan);
        }
        let frame = Frame::new(chart, &complete_hnormal(hn));
        Ok(Verifier {
            chart: chart.clone(),
            hn: hn.clone(),
            torsion: torsion_closed_form(chart, hn),
            curvature: curvature_closed_form(chart, hn),
            frame,
            source: Source::ClosedForm,
        })
    }

    /// Plant `p` (an `A`, `H` or `C` entry) in the connection used for
    /// covariant derivatives.
    pub fn with_perturbation(mut self, p: &Perturbation) -> Result<Self, VerifyError> {
        let perturbed = self.hn.perturbed(p).ok_or(VerifyError::BadPerturbation(p.block.name()))?;
        self.frame = Frame::new(&self.chart, &complete_hnormal(&perturbed));
        Ok(self)
    }

    /// Use an arbitrary nine-block connection for the covariant derivatives.
    pub fn with_derivative_connection(mut self, conn: &NLinearConnection) -> Self {
        self.frame = Frame::new(&self.chart, conn);
        self
    }

    pub fn with_source(mut self, source: Source) -> Self {
        self.source = source;
        self
    }

    pub fn chart(&self) -> &JetChart {
        &self.chart
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn torsion(&self) -> &TorsionComponents {
        &self.torsion
    }

    pub fn curvature(&self) -> &CurvatureComponents {
        &self.curvature
    }

    fn ctx<'a>(&'a self, field: Option<&'a [Expr]>) -> Ctx<'a> {
        let (m, n) = (self.chart.m(), self.chart.n());
        let frame = &self.frame;
        let def_torsion = LazyTensor::new(frame, vec![true, false, false], move |x| definition_torsion(frame, x[0], x[1], x[2]));
        let def_curvature = LazyTensor::new(frame, vec![true, false, false, false], move |x| {
            definition_curvature(frame, x[0], x[1], x[2], x[3])
        });
        let (torsion, curvature) = match self.source {
            Source::ClosedForm => {
                let (t, r) = (&self.torsion, &self.curvature);
                (
                    LazyTensor::new(frame, vec![true, false, false], move |x| torsion_entry(t, m, n, x[0], x[1], x[2])),
                    LazyTensor::new(frame, vec![true, false, false, false], move |x| {
                        curvature_entry(r, m, n, x[0], x[1], x[2], x[3])
                    }),
                )
            }
            Source::Definition => (
                LazyTensor::new(frame, vec![true, false, false], move |x| definition_torsion(frame, x[0], x[1], x[2])),
                LazyTensor::new(frame, vec![true, false, false, false], move |x| {
                    definition_curvature(frame, x[0], x[1], x[2], x[3])
                }),
            ),
        };
        let chart = &self.chart;
        let liouville = LazyTensor::new(frame, vec![true], move |x| {
            let v = x[0];
            if v < m + n {
                Expr::zero()
            } else {
                let k = v - m - n;
                Expr::symbol(chart.p(k / n, k % n))
            }
        });
        let field = field.map(|xs| LazyTensor::new(frame, vec![true], move |x| xs[x[0]].clone()));
        Ctx { m, n, torsion, curvature, def_torsion, def_curvature, field, liouville }
    }

    fn run(&self, ctx: &Ctx<'_>, ids: &[Identity]) -> VerificationReport {
        let (m, n) = (self.chart.m(), self.chart.n());
        let mut report = VerificationReport::default();
        for id in ids {
            for vals in id.assignments(m, n) {
                let terms = id.eval_terms(ctx, &vals);
                let residual = Expr::sum(terms.clone());
                report.push(Instance::new(id.id.clone(), vals, residual, terms));
            }
        }
        report.sort();
        report
    }

    fn check_field(&self, x: &[Expr]) -> Result<(), VerifyError> {
        if x.len() != self.frame.dim() {
            return Err(VerifyError::FieldShape { got: x.len(), expected: self.frame.dim() });
        }
        Ok(())
    }

    /// The eighteen Ricci identities for the d-vector field with unified
    /// components `x` (temporal, spatial, then vertical `(a, i)`).
    pub fn ricci(&self, x: &[Expr]) -> Result<VerificationReport, VerifyError> {
        self.check_field(x)?;
        let ctx = self.ctx(Some(x));
        Ok(self.run(&ctx, &compile(&catalog::RICCI)))
    }

    /// Residuals of caller-supplied identities; `x` feeds the `X` tensor.
    pub fn evaluate(&self, ids: &[Identity], x: Option<&[Expr]>) -> Result<VerificationReport, VerifyError> {
        if let Some(x) = x {
            self.check_field(x)?;
        }
        Ok(self.run(&self.ctx(x), ids))
    }

    pub fn deflection(&self) -> VerificationReport {
        let ctx = self.ctx(None);
        self.run(&ctx, &compile(&catalog::DEFLECTION))
    }

    /// The thirty Bianchi identities, or the subset named by `only`
    /// (ids like `"bianchi.12"` or just `"12"`).
    pub fn bianchi(&self, only: Option<&[&str]>) -> Result<VerificationReport, VerifyError> {
        let mut ids = compile(&catalog::BIANCHI);
        if let Some(sel) = only {
            let want: Vec<String> =
                sel.iter().map(|s| if s.starts_with("bianchi.") { s.to_string() } else { format!("bianchi.{s}") }).collect();
            for w in &want {
                if !ids.iter().any(|i| &i.id == w) {
                    return Err(VerifyError::UnknownIdentity(w.clone()));
                }
            }
            ids.retain(|i| want.contains(&i.id));
        }
        let ctx = self.ctx(None);
        Ok(self.run(&ctx, &ids))
    }

    /// Bianchi identity `id` (LHS − RHS) minus `generic`, an expression in
    /// the same free letters that may use `B1[..]` and `B2[..]`. These are
    /// built from the same torsion and curvature as the identity, so with a
    /// perturbed derivative connection both sides are nonzero and their
    /// difference still vanishes when `generic` is the right slice.
    pub fn bianchi_against(&self, id: &str, generic: &str) -> Result<VerificationReport, VerifyError> {
        let (_, text) = catalog::BIANCHI
            .iter()
            .find(|(i, _)| *i == id)
            .ok_or_else(|| VerifyError::UnknownIdentity(id.to_string()))?;
        let joined = format!("({}) - ({})", lhs_minus_rhs(text), generic);
        let ident = parse_identity(id, &joined).map_err(|e| VerifyError::Dsl(e.to_string()))?;
        Ok(self.run(&self.ctx(None), &[ident]))
    }

    /// [`Verifier::bianchi_against`] for every entry of
    /// [`catalog::BIANCHI_SLICES`].
    pub fn bianchi_mapping(&self) -> VerificationReport {
        let mut out = VerificationReport::default();
        for (id, generic) in catalog::BIANCHI_SLICES {
            out.extend(self.bianchi_against(id, generic).expect("catalog slice parses"));
        }
        out.sort();
        out
    }

    /// `X^A_{:B:C} − X^A_{:C:B} − X^F ℝ^A_{FBC} + X^A_{:F} 𝕋^F_{BC}` over
    /// all unified `A, B, C`, from the definition-based tensors.
    pub fn generic_ricci(&self, x: &[Expr]) -> Result<VerificationReport, VerifyError> {
        self.check_field(x)?;
        let ctx = self.ctx(Some(x));
        let fx = ctx.field.as_ref().expect("field");
        let d = self.frame.dim();
        let mut report = VerificationReport::default();
        for_each_index(&[d, d, d], |i| {
            let (a, b, c) = (i[0], i[1], i[2]);
            let mut terms = vec![fx.get(&[a, b, c]), -fx.get(&[a, c, b])];
            let mut curv = Vec::new();
            let mut tors = Vec::new();
            for f in 0..d {
                curv.push(&fx.get(&[f]) * &ctx.def_curvature.get(&[a, f, b, c]));
                tors.push(&fx.get(&[a, f]) * &ctx.def_torsion.get(&[f, b, c]));
            }
            terms.push(-Expr::sum(curv));
            terms.push(Expr::sum(tors));
            let residual = Expr::sum(terms.clone());
            report.push(Instance::new("ricci.generic", i.to_vec(), residual, terms));
        });
        Ok(report)
    }

    /// Both generic Bianchi families over all unified indices.
    pub fn generic_bianchi(&self) -> VerificationReport {
        let ctx = self.ctx(None);
        let d = self.frame.dim();
        let mut report = VerificationReport::default();
        for_each_index(&[d, d, d, d], |i| {
            let e = b1(&ctx.def_torsion, &ctx.def_curvature, d, i[0], i[1], i[2], i[3]);
            report.push(Instance::new("generic.1", i.to_vec(), e.clone(), vec![e]));
        });
        for_each_index(&[d, d, d, d, d], |i| {
            let e = b2(&ctx.def_torsion, &ctx.def_curvature, d, i[0], i[1], i[2], i[3], i[4]);
            report.push(Instance::new("generic.2", i.to_vec(), e.clone(), vec![e]));
        });
        report
    }

    /// Closed-form deflection tensors minus the covariant derivatives of
    /// `p^a_i` in the derivative frame.
    pub fn deflection_consistency(&self) -> VerificationReport {
        let ctx = self.ctx(None);
        let def = deflection_closed_form(&self.chart, &self.hn);
        let (m, n) = (self.chart.m(), self.chart.n());
        let v = |a: usize, i: usize| m + n + a * n + i;
        let mut report = VerificationReport::default();
        let mut push = |id: &str, idx: &[usize], closed: &Expr, der: Expr| {
            let terms = vec![closed.clone(), -der];
            report.push(Instance::new(id, idx.to_vec(), Expr::sum(terms.clone()), terms));
        };
        for (idx, e) in def.delta_t.indexed() {
            push("delta_t", &idx, e, ctx.liouville.get(&[v(idx[0], idx[1]), idx[2]]));
        }
        for (idx, e) in def.delta_s.indexed() {
            push("delta_s", &idx, e, ctx.liouville.get(&[v(idx[0], idx[1]), m + idx[2]]));
        }
        for (idx, e) in def.theta.indexed() {
            push("theta", &idx, e, ctx.liouville.get(&[v(idx[0], idx[1]), v(idx[2], idx[3])]));
        }
        report
    }
}

fn lhs_minus_rhs(text: &str) -> String {
    match text.split_once('=') {
        Some((l, r)) => format!("({l}) - ({r})"),
        None => text.to_string(),
    }
}

fn compile(list: &[(&str, &str)]) -> Vec<Identity> {
    list.iter().map(|(id, text)| parse_identity(id, text).expect("catalog identity parses")).collect()
}

/// Ricci residuals for a Cartan-type connection and a d-vector field.
pub fn ricci_residuals(chart: &JetChart, hn: &HNormalConnection, x: &[Expr]) -> Result<VerificationReport, VerifyError> {
    Verifier::new(chart, hn)?.ricci(x)
}

pub fn deflection_identity_residuals(chart: &JetChart, hn: &HNormalConnection) -> Result<VerificationReport, VerifyError> {
    Ok(Verifier::new(chart, hn)?.deflection())
}

pub fn bianchi_residuals(chart: &JetChart, hn: &HNormalConnection) -> Result<VerificationReport, VerifyError> {
    Verifier::new(chart, hn)?.bianchi(None)
}

/// Generic Bianchi residuals for any nine-block connection.
pub fn generic_bianchi_residuals(chart: &JetChart, conn: &NLinearConnection) -> VerificationReport {
    let frame = Frame::new(chart, conn);
    let d = frame.dim();
    let def_torsion = LazyTensor::new(&frame, vec![true, false, false], |x| definition_torsion(&frame, x[0], x[1], x[2]));
    let def_curvature =
        LazyTensor::new(&frame, vec![true, false, false, false], |x| definition_curvature(&frame, x[0], x[1], x[2], x[3]));
    let zero = |_: &[usize]| Expr::zero();
    let ctx = Ctx {
        m: chart.m(),
        n: chart.n(),
        torsion: LazyTensor::new(&frame, vec![true, false, false], zero),
        curvature: LazyTensor::new(&frame, vec![true, false, false, false], zero),
        def_torsion,
        def_curvature,
        field: None,
        liouville: LazyTensor::new(&frame, vec![true], zero),
    };
    let mut report = VerificationReport::default();
    for_each_index(&[d, d, d, d], |i| {
        let e = b1(&ctx.def_torsion, &ctx.def_curvature, d, i[0], i[1], i[2], i[3]);
        report.push(Instance::new("generic.1", i.to_vec(), e.clone(), vec![e]));
    });
    for_each_index(&[d, d, d, d, d], |i| {
        let e = b2(&ctx.def_torsion, &ctx.def_curvature, d, i[0], i[1], i[2], i[3], i[4]);
        report.push(Instance::new("generic.2", i.to_vec(), e.clone(), vec![e]));
    });
    report
}

/// `ℂ*` padded with zero horizontal components, as unified components.
pub fn liouville_field(chart: &JetChart) -> Vec<Expr> {
    let mut x = vec![Expr::zero(); chart.dim()];
    for a in 0..chart.m() {
        for i in 0..chart.n() {
            x[chart.m() + chart.n() + a * chart.n() + i] = Expr::symbol(chart.p(a, i));
        }
    }
    x
}

/// Deterministic polynomial d-vector fields for Ricci checks.
pub fn sample_fields(chart: &JetChart, count: usize) -> Vec<Vec<Expr>> {
    let coords: Vec<Expr> = chart.coordinates().map(Expr::symbol).collect();
    let k = coords.len();
    (0..count)
        .map(|s| {
            (0..chart.dim())
                .map(|u| {
                    let a = &coords[(u + s) % k];
                    let b = &coords[(2 * u + 3 * s + 1) % k];
                    let c = Expr::int(((u + s) % 3) as i64 + 1);
                    let e = &(&c * a) * b;
                    &e + &Expr::int((u as i64) - (s as i64))
                })
                .collect()
        })
        .collect()
}
