#![allow(dead_code)]

use dualjet::chart::{JetChart, Matrix, SpatialMetric, TemporalMetric};
use dualjet::connections::{berwald_connection, complete_hnormal, HNormalConnection, RandomCartan};
use dualjet::symbolic::{CoordAssignment, Expr, FuncKind, RawExpr, Rational, Symbol};
use dualjet::tensor::for_each_index;
use dualjet::torsion_curvature::{
    curvature_closed_form, curvature_from_definition, torsion_closed_form, torsion_from_definition,
};
use rand::Rng;

pub fn e(chart: &JetChart, s: &str) -> Expr {
    chart.parse_expr(s).unwrap_or_else(|err| panic!("{s}: {err}"))
}

pub fn diag(chart: &JetChart, entries: &[&str]) -> Matrix {
    (0..entries.len())
        .map(|r| (0..entries.len()).map(|c| if r == c { e(chart, entries[r]) } else { Expr::zero() }).collect())
        .collect()
}

/// m = 1, n = 2, h = 1, φ = diag(1, sin²(x1)).
pub fn sphere() -> (JetChart, HNormalConnection) {
    let chart = JetChart::new(1, 2).unwrap();
    let h = TemporalMetric::identity(&chart);
    let phi = SpatialMetric::new(&chart, diag(&chart, &["1", "sin(x1)^2"])).unwrap();
    let hn = berwald_connection(&h, &phi, &chart);
    (chart, hn)
}

/// m = n = 2, h = diag(1, t1²), φ = diag(1, sin²(x1)).
pub fn curved_pair() -> (JetChart, HNormalConnection) {
    let chart = JetChart::new(2, 2).unwrap();
    let h = TemporalMetric::new(&chart, diag(&chart, &["1", "t1^2"])).unwrap();
    let phi = SpatialMetric::new(&chart, diag(&chart, &["1", "sin(x1)^2"])).unwrap();
    let hn = berwald_connection(&h, &phi, &chart);
    (chart, hn)
}

pub fn flat(m: usize, n: usize) -> (JetChart, HNormalConnection) {
    let chart = JetChart::new(m, n).unwrap();
    let hn = berwald_connection(&TemporalMetric::identity(&chart), &SpatialMetric::identity(&chart), &chart);
    (chart, hn)
}

/// Random Cartan-type connection on m = n = 2 with h = diag(1, t1²).
pub fn random_cartan(seed: u64) -> (JetChart, HNormalConnection) {
    let chart = JetChart::new(2, 2).unwrap();
    let h = TemporalMetric::new(&chart, diag(&chart, &["1", "t1^2"])).unwrap();
    let hn = RandomCartan::with_seed(seed).generate(&chart, &h);
    (chart, hn)
}

/// Random uncanonicalised tree over `syms`. Powers and functions are kept
/// tame so evaluation on [0.2, 1.2] stays moderate.
pub fn random_raw(rng: &mut impl Rng, syms: &[Symbol], depth: u32) -> RawExpr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.35) {
            let num = rng.gen_range(-4..=4);
            let den = rng.gen_range(1..=3);
            RawExpr::Num(Rational::new(num, den))
        } else {
            RawExpr::Sym(syms[rng.gen_range(0..syms.len())].clone())
        };
    }
    match rng.gen_range(0..5) {
        0 | 1 => {
            let k = rng.gen_range(2..=3);
            RawExpr::Sum((0..k).map(|_| random_raw(rng, syms, depth - 1)).collect())
        }
        2 => {
            let k = rng.gen_range(2..=3);
            RawExpr::Product((0..k).map(|_| random_raw(rng, syms, depth - 1)).collect())
        }
        3 => {
            let k = rng.gen_range(-1..=3);
            RawExpr::Pow(Box::new(random_raw(rng, syms, depth - 1)), k)
        }
        _ => {
            let f = [FuncKind::Sin, FuncKind::Cos, FuncKind::Exp][rng.gen_range(0..3)];
            RawExpr::Func(f, Box::new(random_raw(rng, syms, depth - 1)))
        }
    }
}

/// Uniform point on [0.2, 1.2] for every symbol in `syms`.
pub fn random_point(rng: &mut impl Rng, syms: &[Symbol]) -> CoordAssignment {
    syms.iter().map(|s| (s.clone(), rng.gen_range(0.2..1.2))).collect()
}

/// Compare `diff(e, v)` against a central difference with step 1e-6.
/// `None` when the point is outside the domain or values are too large for
/// a meaningful comparison.
pub fn finite_difference_agrees(e: &Expr, v: &Symbol, at: &CoordAssignment) -> Option<bool> {
    const STEP: f64 = 1e-6;
    let d = e.diff(v).eval(at).ok()?;
    let x0 = at.get(v)?;
    let plus = e.eval(&at.clone().with(v, x0 + STEP)).ok()?;
    let minus = e.eval(&at.clone().with(v, x0 - STEP)).ok()?;
    if !(d.is_finite() && plus.is_finite() && minus.is_finite()) || plus.abs().max(minus.abs()) > 1e4 {
        return None;
    }
    let fd = (plus - minus) / (2.0 * STEP);
    Some((d - fd).abs() <= 1e-5 * (1.0 + d.abs()))
}

/// A tree that is identically zero but not syntactically so: `r − r'`
/// with `r'` a reordering of `r`, plus a Pythagorean triple when `trig`.
pub fn disguised_zero(r: &RawExpr, trig: bool) -> RawExpr {
    let mut parts = vec![r.clone(), RawExpr::neg(reorder(r))];
    if trig {
        let sq = |f| RawExpr::Pow(Box::new(RawExpr::Func(f, Box::new(r.clone()))), 2);
        parts.push(sq(FuncKind::Sin));
        parts.push(sq(FuncKind::Cos));
        parts.push(RawExpr::Num(Rational::from_int(-1)));
    }
    RawExpr::Sum(parts)
}

fn reorder(r: &RawExpr) -> RawExpr {
    match r {
        RawExpr::Sum(v) => RawExpr::Sum(v.iter().rev().map(reorder).collect()),
        RawExpr::Product(v) => RawExpr::Product(v.iter().rev().map(reorder).collect()),
        RawExpr::Pow(b, k) => RawExpr::Pow(Box::new(reorder(b)), *k),
        RawExpr::Func(f, a) => RawExpr::Func(*f, Box::new(reorder(a))),
        other => other.clone(),
    }
}

pub type Table3 = Vec<Vec<Vec<Expr>>>;

/// Levi-Civita symbols `Γ^k_{ij}` of a diagonal metric, written out
/// directly: Γ^k_ij = ½ g^{kk}(∂_j g_ki + ∂_i g_kj − ∂_k g_ij).
pub fn levi_civita_diag(g: &[Expr], vars: &[Symbol]) -> Table3 {
    let k = g.len();
    let half = Expr::frac(1, 2);
    let gk = |a: usize, b: usize| if a == b { g[a].clone() } else { Expr::zero() };
    (0..k)
        .map(|l| {
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            let s = &(&gk(l, i).diff(&vars[j]) + &gk(l, j).diff(&vars[i])) - &gk(i, j).diff(&vars[l]);
                            &(&half * &g[l].recip().unwrap()) * &s
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// `𝓡^l_{ijk} = ∂_k Γ^l_ij − ∂_j Γ^l_ik + Γ^r_ij Γ^l_rk − Γ^r_ik Γ^l_rj`.
pub fn riemann(gamma: &Table3, vars: &[Symbol]) -> Vec<Table3> {
    let k = gamma.len();
    (0..k)
        .map(|l| {
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            (0..k)
                                .map(|kk| {
                                    let mut parts = vec![gamma[l][i][j].diff(&vars[kk]), -gamma[l][i][kk].diff(&vars[j])];
                                    for r in 0..k {
                                        parts.push(&gamma[r][i][j] * &gamma[l][r][kk]);
                                        parts.push(-(&gamma[r][i][kk] * &gamma[l][r][j]));
                                    }
                                    Expr::sum(parts)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Polynomial with `terms` monomials of degree ≤ 2 over every coordinate of
/// `chart`, small integer coefficients.
pub fn random_poly(rng: &mut impl Rng, chart: &JetChart, terms: usize) -> Expr {
    let coords: Vec<Symbol> = chart.coordinates().cloned().collect();
    Expr::sum((0..terms).map(|_| {
        let mut mono = Expr::int(rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 });
        for _ in 0..rng.gen_range(0..=2) {
            mono = &mono * &Expr::symbol(&coords[rng.gen_range(0..coords.len())]);
        }
        mono
    }))
}

/// A general nine-block connection with random polynomial entries and a
/// random nonlinear connection; not h-normal.
pub fn random_nlinear(chart: &JetChart, seed: u64) -> dualjet::connections::NLinearConnection {
    use dualjet::chart::{Array3, NonlinearConnection};
    use dualjet::connections::{Block, NLinearConnection};
    use dualjet::tensor::DenseArray;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (m, n) = (chart.m(), chart.n());
    let nl = NonlinearConnection {
        n1: Array3::from_fn(m, n, m, |_, _, _| random_poly(&mut rng, chart, 2)),
        n2: Array3::from_fn(m, n, n, |_, _, _| random_poly(&mut rng, chart, 2)),
    };
    let blocks = Block::ALL.map(|b| DenseArray::from_fn(&b.shape(m, n), |_| random_poly(&mut rng, chart, 2)));
    NLinearConnection::from_blocks(chart, nl, blocks)
}

/// m = n = 2 with h = diag(1, sin²(t1)) and φ = diag(1, sin²(x1)); both
/// metrics have nonzero curvature.
pub fn two_spheres() -> (JetChart, HNormalConnection) {
    let chart = JetChart::new(2, 2).unwrap();
    let h = TemporalMetric::new(&chart, diag(&chart, &["1", "sin(t1)^2"])).unwrap();
    let phi = SpatialMetric::new(&chart, diag(&chart, &["1", "sin(x1)^2"])).unwrap();
    let hn = berwald_connection(&h, &phi, &chart);
    (chart, hn)
}

/// Brute-force curvatures of the diagonal metrics of a Berwald instance.
pub fn oracles(chart: &JetChart, h_diag: &[&str], phi_diag: &[&str]) -> (Vec<Table3>, Vec<Table3>) {
    let h: Vec<Expr> = h_diag.iter().map(|s| e(chart, s)).collect();
    let phi: Vec<Expr> = phi_diag.iter().map(|s| e(chart, s)).collect();
    let chi = riemann(&levi_civita_diag(&h, chart.t_symbols()), chart.t_symbols());
    let rs = riemann(&levi_civita_diag(&phi, chart.x_symbols()), chart.x_symbols());
    (chi, rs)
}

fn p(chart: &JetChart, a: usize, i: usize) -> Expr {
    Expr::symbol(chart.p(a, i))
}

pub fn check_berwald_closed_forms(chart: &JetChart, hn: &HNormalConnection, h_diag: &[&str], phi_diag: &[&str]) {
    let (m, n) = (chart.m(), chart.n());
    let (chi, rs) = oracles(chart, h_diag, phi_diag);
    let t = torsion_closed_form(chart, hn);
    for (name, arr) in t.families() {
        if name != "R_ab" && name != "R_ij" {
            assert!(arr.is_zero(), "torsion {name}");
        }
    }
    for_each_index(&[m, n, m, m], |x| {
        let (f, r, a, b) = (x[0], x[1], x[2], x[3]);
        let want = Expr::sum((0..m).map(|g| &chi[f][g][a][b] * &p(chart, g, r)));
        assert_eq!(t.r_ab.get(x), &want, "R_ab {x:?}");
    });
    for_each_index(&[m, n, n, n], |x| {
        let (f, r, i, j) = (x[0], x[1], x[2], x[3]);
        let want = -Expr::sum((0..n).map(|s| &rs[s][r][i][j] * &p(chart, f, s)));
        assert_eq!(t.r_ij.get(x), &want, "R_ij {x:?}");
    });

    let c = curvature_closed_form(chart, hn);
    for (name, arr) in c.families() {
        if name != "chi" && name != "R_ijk" {
            assert!(arr.is_zero(), "curvature {name}");
        }
    }
    for_each_index(&[m, m, m, m], |x| assert_eq!(c.chi.get(x), &chi[x[0]][x[1]][x[2]][x[3]], "chi {x:?}"));
    for_each_index(&[n, n, n, n], |x| assert_eq!(c.r_ijk.get(x), &rs[x[0]][x[1]][x[2]][x[3]], "R_ijk {x:?}"));
    // vertical rows
    for_each_index(&[m, n, m, n, m, m], |x| {
        let (d, l, a, i, b, cc) = (x[0], x[1], x[2], x[3], x[4], x[5]);
        let want = if i == l { -&chi[d][a][b][cc] } else { Expr::zero() };
        assert_eq!(c.v_r_bc().get(x), &want);
    });
    let v = c.v_view("R_ijk").unwrap();
    for_each_index(v.dims(), |x| {
        let (d, i, a, l, j, k) = (x[0], x[1], x[2], x[3], x[4], x[5]);
        let want = if d == a { rs[l][i][j][k].clone() } else { Expr::zero() };
        assert_eq!(v.get(x), &want);
    });
}

pub fn assert_oracle_equivalence(chart: &JetChart, hn: &HNormalConnection, label: &str) {
    let conn = complete_hnormal(hn);
    let td = torsion_from_definition(chart, &conn);
    let tc = torsion_closed_form(chart, hn);
    for ((name, a), (_, b)) in tc.families().into_iter().zip(td.components.families()) {
        assert_eq!(a, b, "{label}: torsion {name}");
    }
    assert!(td.structural_mismatches.is_empty(), "{label}: {:?}", &td.structural_mismatches[..1]);
    let cd = curvature_from_definition(chart, &conn);
    let cc = curvature_closed_form(chart, hn);
    for ((name, a), (_, b)) in cc.families().into_iter().zip(cd.components.families()) {
        assert_eq!(a, b, "{label}: curvature {name}");
    }
    assert!(cd.structural_mismatches.is_empty(), "{label}: {:?}", &cd.structural_mismatches[..1]);
}
