//! Torsion and curvature d-tensors of h-normal N-linear connections.
//!
//! Closed forms come from the effective blocks; the definition-based oracles
//! assemble `𝕋^F_{BC} = Γ^F_{BC} − Γ^F_{CB} − R^F_{CB}` and
//! `ℝ^A_{FBC} = Y_C Γ^A_{FB} − Y_B Γ^A_{FC} + Γ^G_{FB}Γ^A_{GC} − Γ^G_{FC}Γ^A_{GB} − R^G_{CB}Γ^A_{FG}`
//! directly from the adapted frame.
//!
//! Every family is stored with its indices in the order they are written,
//! vertical pairs as `(temporal, spatial)`.

use crate::connections::{complete_hnormal, HNormalConnection, NLinearConnection};
use crate::dtensor::{DTensor, IndexClass, IndexSlot};
use crate::chart::JetChart;
use crate::frame::Frame;
use crate::identities::{Instance, VerificationReport};
use crate::symbolic::Expr;
use crate::tensor::{for_each_index, DenseArray};

/// Nine torsion families.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionComponents {
    /// `T^r_{aj}` `[r][a][j]`.
    pub t_aj: DenseArray,
    /// `T^r_{ij}` `[r][i][j]`.
    pub t_ij: DenseArray,
    /// `P^{r(j)}_{i(b)}` `[r][i][b][j]`.
    pub p_ib: DenseArray,
    /// `P^{(f)(j)}_{(r)a(b)}` `[f][r][a][b][j]`.
    pub p_rab: DenseArray,
    /// `P^{(f)(j)}_{(r)i(b)}` `[f][r][i][b][j]`.
    pub p_rib: DenseArray,
    /// `R^{(f)}_{(r)ab}` `[f][r][a][b]`.
    pub r_ab: DenseArray,
    /// `R^{(f)}_{(r)aj}` `[f][r][a][j]`.
    pub r_aj: DenseArray,
    /// `R^{(f)}_{(r)ij}` `[f][r][i][j]`.
    pub r_ij: DenseArray,
    /// `S^{(f)(i)(j)}_{(r)(a)(b)}` `[f][r][a][i][b][j]`.
    pub s: DenseArray,
}

/// Seven curvature families (h-columns).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureComponents {
    /// `χ^d_{abc}` `[d][a][b][c]`.
    pub chi: DenseArray,
    /// `R^l_{ibc}` `[l][i][b][c]`.
    pub r_ibc: DenseArray,
    /// `R^l_{ibk}` `[l][i][b][k]`.
    pub r_ibk: DenseArray,
    /// `P^{l(k)}_{ib(c)}` `[l][i][b][c][k]`.
    pub p_ib: DenseArray,
    /// `R^l_{ijk}` `[l][i][j][k]`.
    pub r_ijk: DenseArray,
    /// `P^{l(k)}_{ij(c)}` `[l][i][j][c][k]`.
    pub p_ij: DenseArray,
    /// `S^{l(j)(k)}_{i(b)(c)}` `[l][i][b][j][c][k]`.
    pub s: DenseArray,
}

impl TorsionComponents {
    pub fn families(&self) -> [(&'static str, &DenseArray); 9] {
        [
            ("T_aj", &self.t_aj),
            ("T_ij", &self.t_ij),
            ("P_ib", &self.p_ib),
            ("P_rab", &self.p_rab),
            ("P_rib", &self.p_rib),
            ("R_ab", &self.r_ab),
            ("R_aj", &self.r_aj),
            ("R_ij", &self.r_ij),
            ("S", &self.s),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.families().iter().all(|(_, a)| a.is_zero())
    }

    /// `e + e'` for every entry of `T_ij`, `R_ab`, `R_ij`, `S` and its partner
    /// with the antisymmetric pair swapped; ids are `torsion.<family>`.
    pub fn antisymmetry_residuals(&self) -> VerificationReport {
        let mut out = VerificationReport::default();
        antisym("torsion", "T_ij", &self.t_ij, swap_last2, &mut out);
        antisym("torsion", "R_ab", &self.r_ab, swap_last2, &mut out);
        antisym("torsion", "R_ij", &self.r_ij, swap_last2, &mut out);
        antisym("torsion", "S", &self.s, swap_pairs, &mut out);
        out
    }

    /// Entries that break the antisymmetries of `R_ab`, `R_ij`, `T_ij`, `S`.
    pub fn antisymmetry_violations(&self) -> Vec<(&'static str, Vec<usize>)> {
        violations(&self.antisymmetry_residuals(), &self.families())
    }
}

fn swap_last2(idx: &[usize]) -> Vec<usize> {
    let mut j = idx.to_vec();
    let r = j.len();
    j.swap(r - 2, r - 1);
    j
}

fn swap_pairs(idx: &[usize]) -> Vec<usize> {
    vec![idx[0], idx[1], idx[4], idx[5], idx[2], idx[3]]
}

fn antisym(prefix: &str, name: &str, a: &DenseArray, swap: fn(&[usize]) -> Vec<usize>, out: &mut VerificationReport) {
    for (idx, e) in a.indexed() {
        let other = a.get(&swap(&idx)).clone();
        let terms = vec![e.clone(), other];
        out.push(Instance::new(format!("{prefix}.{name}"), idx, Expr::sum(terms.clone()), terms));
    }
}

fn violations<const K: usize>(r: &VerificationReport, fams: &[(&'static str, &DenseArray); K]) -> Vec<(&'static str, Vec<usize>)> {
    r.instances
        .iter()
        .filter(|i| !i.symbolic_zero)
        .map(|i| {
            let fam = i.identity.split_once('.').map(|x| x.1).unwrap_or("");
            let name = fams.iter().map(|f| f.0).find(|n| *n == fam).unwrap_or("?");
            (name, i.index.clone())
        })
        .collect()
}

impl CurvatureComponents {
    pub fn families(&self) -> [(&'static str, &DenseArray); 7] {
        [
            ("chi", &self.chi),
            ("R_ibc", &self.r_ibc),
            ("R_ibk", &self.r_ibk),
            ("P_ib", &self.p_ib),
            ("R_ijk", &self.r_ijk),
            ("P_ij", &self.p_ij),
            ("S", &self.s),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.families().iter().all(|(_, a)| a.is_zero())
    }

    /// Antisymmetry in the last two lower indices of `chi`, `R_ibc`,
    /// `R_ijk`, and in the two vertical pairs of `S`; ids are `curvature.<family>`.
    pub fn antisymmetry_residuals(&self) -> VerificationReport {
        let mut out = VerificationReport::default();
        antisym("curvature", "chi", &self.chi, swap_last2, &mut out);
        antisym("curvature", "R_ibc", &self.r_ibc, swap_last2, &mut out);
        antisym("curvature", "R_ijk", &self.r_ijk, swap_last2, &mut out);
        antisym("curvature", "S", &self.s, swap_pairs, &mut out);
        out
    }

    pub fn antisymmetry_violations(&self) -> Vec<(&'static str, Vec<usize>)> {
        violations(&self.antisymmetry_residuals(), &self.families())
    }

    /// `R^{(d)(i)}_{(l)(a)bc}` `[d][l][a][i][b][c]`, from
    /// `−R^{(d)(i)}_{(l)(a)bc} = δ^i_l χ^d_{abc} − δ^d_a R^i_{lbc}`.
    pub fn v_r_bc(&self) -> DenseArray {
        let [m, n] = self.mn();
        DenseArray::from_fn(&[m, n, m, n, m, m], |x| {
            let (d, l, a, i, b, c) = (x[0], x[1], x[2], x[3], x[4], x[5]);
            let mut e = Expr::zero();
            if i == l {
                e = -self.chi.get(&[d, a, b, c]);
            }
            if d == a {
                e = &e + self.r_ibc.get(&[i, l, b, c]);
            }
            e
        })
    }

    /// The remaining vertical-row views: `δ^d_a` times the h-column family.
    /// `family` is one of `R_ibk`, `P_ib`, `R_ijk`, `P_ij`, `S`; the result
    /// is indexed `[d][l][a][i]` followed by the family's lower indices.
    pub fn v_view(&self, family: &str) -> Option<DenseArray> {
        let [m, n] = self.mn();
        let src = match family {
            "R_ibk" => &self.r_ibk,
            "P_ib" => &self.p_ib,
            "R_ijk" => &self.r_ijk,
            "P_ij" => &self.p_ij,
            "S" => &self.s,
            _ => return None,
        };
        let mut dims = vec![m, n, m, n];
        dims.extend_from_slice(&src.dims()[2..]);
        Some(DenseArray::from_fn(&dims, |x| {
            if x[0] != x[2] {
                return Expr::zero();
            }
            let mut j = vec![x[3], x[1]];
            j.extend_from_slice(&x[4..]);
            src.get(&j).clone()
        }))
    }

    fn mn(&self) -> [usize; 2] {
        [self.chi.dims()[0], self.r_ibc.dims()[0]]
    }
}

fn kron(a: usize, b: usize) -> bool {
    a == b
}

/// Torsion closed forms for an h-normal connection.
pub fn torsion_closed_form(chart: &JetChart, hn: &HNormalConnection) -> TorsionComponents {
    let (m, n) = (chart.m(), chart.n());
    let nl = &hn.nl;
    let (n1, n2) = (&nl.n1, &nl.n2);
    let dt = |e: &Expr, a: usize| nl.delta_dt(chart, e, a);
    let dx = |e: &Expr, i: usize| nl.delta_dx(chart, e, i);
    TorsionComponents {
        t_aj: DenseArray::from_fn(&[n, m, n], |x| -hn.a.get(&[x[0], x[2], x[1]])),
        t_ij: DenseArray::from_fn(&[n, n, n], |x| hn.h_s.get(&[x[0], x[1], x[2]]) - hn.h_s.get(&[x[0], x[2], x[1]])),
        p_ib: DenseArray::from_fn(&[n, n, m, n], |x| hn.c.get(x).clone()),
        p_rab: DenseArray::from_fn(&[m, n, m, m, n], |x| {
            let (f, r, a, b, j) = (x[0], x[1], x[2], x[3], x[4]);
            let mut e = n1.get(f, r, a).diff(chart.p(b, j));
            if kron(f, b) {
                e = &e + hn.a.get(&[j, r, a]);
            }
            if kron(j, r) {
                e = &e - hn.chi.get(f, b, a);
            }
            e
        }),
        p_rib: DenseArray::from_fn(&[m, n, n, m, n], |x| {
            let (f, r, i, b, j) = (x[0], x[1], x[2], x[3], x[4]);
            let mut e = n2.get(f, r, i).diff(chart.p(b, j));
            if kron(f, b) {
                e = &e + hn.h_s.get(&[j, r, i]);
            }
            e
        }),
        r_ab: DenseArray::from_fn(&[m, n, m, m], |x| {
            let (f, r, a, b) = (x[0], x[1], x[2], x[3]);
            &dt(n1.get(f, r, a), b) - &dt(n1.get(f, r, b), a)
        }),
        r_aj: DenseArray::from_fn(&[m, n, m, n], |x| {
            let (f, r, a, j) = (x[0], x[1], x[2], x[3]);
            &dx(n1.get(f, r, a), j) - &dt(n2.get(f, r, j), a)
        }),
        r_ij: DenseArray::from_fn(&[m, n, n, n], |x| {
            let (f, r, i, j) = (x[0], x[1], x[2], x[3]);
            &dx(n2.get(f, r, i), j) - &dx(n2.get(f, r, j), i)
        }),
        s: DenseArray::from_fn(&[m, n, m, n, m, n], |x| {
            let (f, r, a, i, b, j) = (x[0], x[1], x[2], x[3], x[4], x[5]);
            let mut e = Expr::zero();
            if kron(f, a) {
                e = -hn.c.get(&[i, r, b, j]);
            }
            if kron(f, b) {
                e = &e + hn.c.get(&[j, r, a, i]);
            }
            e
        }),
    }
}

/// `C^{i(k)}_{j(c)}` as a d-tensor with slots (spatial up, spatial down,
/// vertical down).
pub fn c_tensor(chart: &JetChart, hn: &HNormalConnection) -> DTensor {
    let (m, n) = (chart.m(), chart.n());
    let slots =
        vec![IndexSlot::up(IndexClass::Spatial), IndexSlot::down(IndexClass::Spatial), IndexSlot::down(IndexClass::Vertical)];
    DTensor::from_fn(m, n, slots, |x| hn.c.get(&[x[0], x[1], x[2] / n, x[2] % n]).clone())
}

/// Curvature closed forms for an h-normal connection.
pub fn curvature_closed_form(chart: &JetChart, hn: &HNormalConnection) -> CurvatureComponents {
    let tor = torsion_closed_form(chart, hn);
    let frame = Frame::new(chart, &complete_hnormal(hn));
    curvature_closed_form_with(chart, hn, &tor, &frame)
}

fn curvature_closed_form_with(
    chart: &JetChart,
    hn: &HNormalConnection,
    tor: &TorsionComponents,
    frame: &Frame,
) -> CurvatureComponents {
    let (m, n) = (chart.m(), chart.n());
    let nl = &hn.nl;
    let dt = |e: &Expr, a: usize| nl.delta_dt(chart, e, a);
    let dx = |e: &Expr, i: usize| nl.delta_dx(chart, e, i);
    let (chi, a, h, c) = (&hn.chi, &hn.a, &hn.h_s, &hn.c);
    let ct = c_tensor(chart, hn);
    let c_dt = ct.cov_deriv(frame, IndexClass::Temporal);
    let c_dx = ct.cov_deriv(frame, IndexClass::Spatial);
    // Σ_{f,r} C^{l(r)}_{i(f)} X[f][r]
    let c_contract = |l: usize, i: usize, x: &dyn Fn(usize, usize) -> Expr| {
        let mut parts = Vec::new();
        for f in 0..m {
            for r in 0..n {
                let cc = c.get(&[l, i, f, r]);
                if !cc.is_zero() {
                    parts.push(cc * &x(f, r));
                }
            }
        }
        Expr::sum(parts)
    };
    CurvatureComponents {
        chi: DenseArray::from_fn(&[m, m, m, m], |x| {
            let (d, aa, b, cc) = (x[0], x[1], x[2], x[3]);
            let mut parts = vec![dt(chi.get(d, aa, b), cc), -dt(chi.get(d, aa, cc), b)];
            for f in 0..m {
                parts.push(chi.get(f, aa, b) * chi.get(d, f, cc));
                parts.push(-(chi.get(f, aa, cc) * chi.get(d, f, b)));
            }
            Expr::sum(parts)
        }),
        r_ibc: DenseArray::from_fn(&[n, n, m, m], |x| {
            let (l, i, b, cc) = (x[0], x[1], x[2], x[3]);
            let mut parts = vec![dt(a.get(&[l, i, b]), cc), -dt(a.get(&[l, i, cc]), b)];
            for r in 0..n {
                parts.push(a.get(&[r, i, b]) * a.get(&[l, r, cc]));
                parts.push(-(a.get(&[r, i, cc]) * a.get(&[l, r, b])));
            }
            parts.push(c_contract(l, i, &|f, r| tor.r_ab.get(&[f, r, b, cc]).clone()));
            Expr::sum(parts)
        }),
        r_ibk: DenseArray::from_fn(&[n, n, m, n], |x| {
            let (l, i, b, k) = (x[0], x[1], x[2], x[3]);
            let mut parts = vec![dx(a.get(&[l, i, b]), k), -dt(h.get(&[l, i, k]), b)];
            for r in 0..n {
                parts.push(a.get(&[r, i, b]) * h.get(&[l, r, k]));
                parts.push(-(h.get(&[r, i, k]) * a.get(&[l, r, b])));
            }
            parts.push(c_contract(l, i, &|f, r| tor.r_aj.get(&[f, r, b, k]).clone()));
            Expr::sum(parts)
        }),
        p_ib: DenseArray::from_fn(&[n, n, m, m, n], |x| {
            let (l, i, b, cc, k) = (x[0], x[1], x[2], x[3], x[4]);
            Expr::sum(vec![
                a.get(&[l, i, b]).diff(chart.p(cc, k)),
                -c_dt.get(&[l, i, cc * n + k, b]),
                c_contract(l, i, &|f, r| tor.p_rab.get(&[f, r, b, cc, k]).clone()),
            ])
        }),
        r_ijk: DenseArray::from_fn(&[n, n, n, n], |x| {
            let (l, i, j, k) = (x[0], x[1], x[2], x[3]);
            let mut parts = vec![dx(h.get(&[l, i, j]), k), -dx(h.get(&[l, i, k]), j)];
            for r in 0..n {
                parts.push(h.get(&[r, i, j]) * h.get(&[l, r, k]));
                parts.push(-(h.get(&[r, i, k]) * h.get(&[l, r, j])));
            }
            parts.push(c_contract(l, i, &|f, r| tor.r_ij.get(&[f, r, j, k]).clone()));
            Expr::sum(parts)
        }),
        p_ij: DenseArray::from_fn(&[n, n, n, m, n], |x| {
            let (l, i, j, cc, k) = (x[0], x[1], x[2], x[3], x[4]);
            Expr::sum(vec![
                h.get(&[l, i, j]).diff(chart.p(cc, k)),
                -c_dx.get(&[l, i, cc * n + k, j]),
                c_contract(l, i, &|f, r| tor.p_rib.get(&[f, r, j, cc, k]).clone()),
            ])
        }),
        s: DenseArray::from_fn(&[n, n, m, n, m, n], |x| {
            let (l, i, b, j, cc, k) = (x[0], x[1], x[2], x[3], x[4], x[5]);
            let mut parts =
                vec![c.get(&[l, i, b, j]).diff(chart.p(cc, k)), -c.get(&[l, i, cc, k]).diff(chart.p(b, j))];
            for r in 0..n {
                parts.push(c.get(&[r, i, b, j]) * c.get(&[l, r, cc, k]));
                parts.push(-(c.get(&[r, i, cc, k]) * c.get(&[l, r, b, j])));
            }
            Expr::sum(parts)
        }),
    }
}

/// Unified-index access to the torsion `𝕋^F_{BC}` described by a set of
/// families. Entries outside the nine families are zero.
pub fn torsion_entry(t: &TorsionComponents, m: usize, n: usize, f: usize, b: usize, c: usize) -> Expr {
    let u = Unified { m, n };
    let (cf, cb, cc) = (u.class(f), u.class(b), u.class(c));
    use IndexClass::*;
    // (row order, swapped?)
    let (b, c, cb, cc, sign) = if u.order(cb) <= u.order(cc) { (b, c, cb, cc, 1) } else { (c, b, cc, cb, -1) };
    let (lb, lc) = (u.local(b), u.local(c));
    let e = match cf {
        Temporal => return Expr::zero(),
        Spatial => {
            let r = u.local(f);
            match (cb, cc) {
                (Temporal, Spatial) => t.t_aj.get(&[r, lb, lc]).clone(),
                (Spatial, Spatial) => t.t_ij.get(&[r, lb, lc]).clone(),
                (Spatial, Vertical) => t.p_ib.get(&[r, lb, lc / n, lc % n]).clone(),
                _ => return Expr::zero(),
            }
        }
        Vertical => {
            let (ff, r) = (u.local(f) / n, u.local(f) % n);
            match (cb, cc) {
                (Temporal, Temporal) => t.r_ab.get(&[ff, r, lb, lc]).clone(),
                (Temporal, Spatial) => t.r_aj.get(&[ff, r, lb, lc]).clone(),
                (Temporal, Vertical) => t.p_rab.get(&[ff, r, lb, lc / n, lc % n]).clone(),
                (Spatial, Spatial) => t.r_ij.get(&[ff, r, lb, lc]).clone(),
                (Spatial, Vertical) => t.p_rib.get(&[ff, r, lb, lc / n, lc % n]).clone(),
                (Vertical, Vertical) => t.s.get(&[ff, r, lb / n, lb % n, lc / n, lc % n]).clone(),
                _ => unreachable!(),
            }
        }
    };
    if sign < 0 {
        -e
    } else {
        e
    }
}

/// Unified-index access to `ℝ^A_{FBC}` described by the seven families and
/// the vertical-row relations.
pub fn curvature_entry(r: &CurvatureComponents, m: usize, n: usize, a: usize, f: usize, b: usize, c: usize) -> Expr {
    let u = Unified { m, n };
    use IndexClass::*;
    let (ca, cf) = (u.class(a), u.class(f));
    if ca != cf {
        return Expr::zero();
    }
    match ca {
        Temporal => h_column(r, &u, true, u.local(a), u.local(f), b, c),
        Spatial => h_column(r, &u, false, u.local(a), u.local(f), b, c),
        Vertical => {
            let (d, l) = (u.local(a) / n, u.local(a) % n);
            let (aa, i) = (u.local(f) / n, u.local(f) % n);
            let mut e = Expr::zero();
            if i == l {
                e = h_column(r, &u, true, d, aa, b, c);
            }
            if d == aa {
                e = &e - &h_column(r, &u, false, i, l, b, c);
            }
            e
        }
    }
}

fn h_column(r: &CurvatureComponents, u: &Unified, temporal: bool, up: usize, low: usize, b: usize, c: usize) -> Expr {
    use IndexClass::*;
    let (cb, cc) = (u.class(b), u.class(c));
    let (b, c, cb, cc, sign) = if u.order(cb) <= u.order(cc) { (b, c, cb, cc, 1) } else { (c, b, cc, cb, -1) };
    let (lb, lc) = (u.local(b), u.local(c));
    let n = u.n;
    let e = if temporal {
        match (cb, cc) {
            (Temporal, Temporal) => r.chi.get(&[up, low, lb, lc]).clone(),
            _ => Expr::zero(),
        }
    } else {
        match (cb, cc) {
            (Temporal, Temporal) => r.r_ibc.get(&[up, low, lb, lc]).clone(),
            (Temporal, Spatial) => r.r_ibk.get(&[up, low, lb, lc]).clone(),
            (Temporal, Vertical) => r.p_ib.get(&[up, low, lb, lc / n, lc % n]).clone(),
            (Spatial, Spatial) => r.r_ijk.get(&[up, low, lb, lc]).clone(),
            (Spatial, Vertical) => r.p_ij.get(&[up, low, lb, lc / n, lc % n]).clone(),
            (Vertical, Vertical) => r.s.get(&[up, low, lb / n, lb % n, lc / n, lc % n]).clone(),
            _ => unreachable!(),
        }
    };
    if sign < 0 {
        -e
    } else {
        e
    }
}

#[derive(Clone, Copy)]
struct Unified {
    m: usize,
    n: usize,
}

impl Unified {
    fn class(&self, u: usize) -> IndexClass {
        if u < self.m {
            IndexClass::Temporal
        } else if u < self.m + self.n {
            IndexClass::Spatial
        } else {
            IndexClass::Vertical
        }
    }

    fn local(&self, u: usize) -> usize {
        match self.class(u) {
            IndexClass::Temporal => u,
            IndexClass::Spatial => u - self.m,
            IndexClass::Vertical => u - self.m - self.n,
        }
    }

    fn order(&self, c: IndexClass) -> u8 {
        match c {
            IndexClass::Temporal => 0,
            IndexClass::Spatial => 1,
            IndexClass::Vertical => 2,
        }
    }

    fn unified(&self, c: IndexClass, l: usize) -> usize {
        match c {
            IndexClass::Temporal => l,
            IndexClass::Spatial => self.m + l,
            IndexClass::Vertical => self.m + self.n + l,
        }
    }
}

/// `𝕋^F_{BC}` for any nine-block connection, from the frame.
pub fn definition_torsion(frame: &Frame, f: usize, b: usize, c: usize) -> Expr {
    frame.gamma(f, b, c) - frame.gamma(f, c, b) - frame.bracket(f, c, b).clone()
}

/// `ℝ^A_{FBC}` for any nine-block connection, from the frame.
pub fn definition_curvature(frame: &Frame, a: usize, f: usize, b: usize, c: usize) -> Expr {
    let d = frame.dim();
    let mut parts = vec![frame.y(c, frame.gamma(a, f, b)), -frame.y(b, frame.gamma(a, f, c))];
    for g in 0..d {
        let (x, y) = (frame.gamma(g, f, b), frame.gamma(a, g, c));
        if !x.is_zero() && !y.is_zero() {
            parts.push(x * y);
        }
        let (x, y) = (frame.gamma(g, f, c), frame.gamma(a, g, b));
        if !x.is_zero() && !y.is_zero() {
            parts.push(-(x * y));
        }
        let (x, y) = (frame.bracket(g, c, b), frame.gamma(a, f, g));
        if !x.is_zero() && !y.is_zero() {
            parts.push(-(x * y));
        }
    }
    Expr::sum(parts)
}

/// An oracle result: the families read off the full definition-based array,
/// plus every entry where the full array disagrees with the structure implied
/// by those families (unified indices and the offending difference).
#[derive(Debug, Clone)]
pub struct OracleResult<T> {
    pub components: T,
    pub structural_mismatches: Vec<(Vec<usize>, Expr)>,
}

/// Torsion from the coordinate-free definition.
pub fn torsion_from_definition(chart: &JetChart, conn: &NLinearConnection) -> OracleResult<TorsionComponents> {
    let frame = Frame::new(chart, conn);
    let (m, n) = (chart.m(), chart.n());
    let u = Unified { m, n };
    use IndexClass::*;
    let (t, s, v) = (Temporal, Spatial, Vertical);
    let tt = |f: IndexClass, lf: usize, b: IndexClass, lb: usize, c: IndexClass, lc: usize| {
        definition_torsion(&frame, u.unified(f, lf), u.unified(b, lb), u.unified(c, lc))
    };
    let comps = TorsionComponents {
        t_aj: DenseArray::from_fn(&[n, m, n], |x| tt(s, x[0], t, x[1], s, x[2])),
        t_ij: DenseArray::from_fn(&[n, n, n], |x| tt(s, x[0], s, x[1], s, x[2])),
        p_ib: DenseArray::from_fn(&[n, n, m, n], |x| tt(s, x[0], s, x[1], v, x[2] * n + x[3])),
        p_rab: DenseArray::from_fn(&[m, n, m, m, n], |x| tt(v, x[0] * n + x[1], t, x[2], v, x[3] * n + x[4])),
        p_rib: DenseArray::from_fn(&[m, n, n, m, n], |x| tt(v, x[0] * n + x[1], s, x[2], v, x[3] * n + x[4])),
        r_ab: DenseArray::from_fn(&[m, n, m, m], |x| tt(v, x[0] * n + x[1], t, x[2], t, x[3])),
        r_aj: DenseArray::from_fn(&[m, n, m, n], |x| tt(v, x[0] * n + x[1], t, x[2], s, x[3])),
        r_ij: DenseArray::from_fn(&[m, n, n, n], |x| tt(v, x[0] * n + x[1], s, x[2], s, x[3])),
        s: DenseArray::from_fn(&[m, n, m, n, m, n], |x| {
            tt(v, x[0] * n + x[1], v, x[2] * n + x[3], v, x[4] * n + x[5])
        }),
    };
    let d = frame.dim();
    let mut mismatches = Vec::new();
    for_each_index(&[d, d, d], |x| {
        let full = definition_torsion(&frame, x[0], x[1], x[2]);
        let diff = &full - &torsion_entry(&comps, m, n, x[0], x[1], x[2]);
        if !diff.is_zero() {
            mismatches.push((x.to_vec(), diff));
        }
    });
    OracleResult { components: comps, structural_mismatches: mismatches }
}

/// Curvature from the coordinate-free definition.
pub fn curvature_from_definition(chart: &JetChart, conn: &NLinearConnection) -> OracleResult<CurvatureComponents> {
    let frame = Frame::new(chart, conn);
    let (m, n) = (chart.m(), chart.n());
    let u = Unified { m, n };
    use IndexClass::*;
    let (t, s, v) = (Temporal, Spatial, Vertical);
    let rr = |up: IndexClass, la: usize, low: IndexClass, lf: usize, b: IndexClass, lb: usize, c: IndexClass, lc: usize| {
        definition_curvature(&frame, u.unified(up, la), u.unified(low, lf), u.unified(b, lb), u.unified(c, lc))
    };
    let comps = CurvatureComponents {
        chi: DenseArray::from_fn(&[m, m, m, m], |x| rr(t, x[0], t, x[1], t, x[2], t, x[3])),
        r_ibc: DenseArray::from_fn(&[n, n, m, m], |x| rr(s, x[0], s, x[1], t, x[2], t, x[3])),
        r_ibk: DenseArray::from_fn(&[n, n, m, n], |x| rr(s, x[0], s, x[1], t, x[2], s, x[3])),
        p_ib: DenseArray::from_fn(&[n, n, m, m, n], |x| rr(s, x[0], s, x[1], t, x[2], v, x[3] * n + x[4])),
        r_ijk: DenseArray::from_fn(&[n, n, n, n], |x| rr(s, x[0], s, x[1], s, x[2], s, x[3])),
        p_ij: DenseArray::from_fn(&[n, n, n, m, n], |x| rr(s, x[0], s, x[1], s, x[2], v, x[3] * n + x[4])),
        s: DenseArray::from_fn(&[n, n, m, n, m, n], |x| {
            rr(s, x[0], s, x[1], v, x[2] * n + x[3], v, x[4] * n + x[5])
        }),
    };
    let d = frame.dim();
    let mut mismatches = Vec::new();
    for_each_index(&[d, d, d, d], |x| {
        if u.class(x[0]) != u.class(x[1]) {
            // Γ preserves the three distributions, so these vanish identically.
            let e = definition_curvature(&frame, x[0], x[1], x[2], x[3]);
            if !e.is_zero() {
                mismatches.push((x.to_vec(), e));
            }
            return;
        }
        let full = definition_curvature(&frame, x[0], x[1], x[2], x[3]);
        let diff = &full - &curvature_entry(&comps, m, n, x[0], x[1], x[2], x[3]);
        if !diff.is_zero() {
            mismatches.push((x.to_vec(), diff));
        }
    });
    OracleResult { components: comps, structural_mismatches: mismatches }
}
