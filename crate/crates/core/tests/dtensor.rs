mod common;

use common::{e, flat, random_nlinear, random_poly, sphere};
use dualjet::chart::JetChart;
use dualjet::connections::complete_hnormal;
use dualjet::dtensor::{cov_deriv_h_m, cov_deriv_h_t, cov_deriv_v, DTensor, IndexClass, IndexSlot, Variance};
use dualjet::frame::Frame;
use dualjet::symbolic::Expr;
use dualjet::tensor::for_each_index;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use IndexClass::{Spatial, Temporal, Vertical};

fn field(chart: &JetChart, slots: Vec<IndexSlot>, seed: u64) -> DTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DTensor::from_fn(chart.m(), chart.n(), slots, |_| random_poly(&mut rng, chart, 3))
}

fn vector(chart: &JetChart, class: IndexClass, seed: u64) -> DTensor {
    field(chart, vec![IndexSlot::up(class)], seed)
}

/// The nine per-slot formulas for a d-vector field, transcribed directly.
#[test]
fn per_slot_formulas_for_d_vectors() {
    let chart = JetChart::new(2, 2).unwrap();
    let (m, n) = (2, 2);
    for seed in 1..=3 {
        let conn = random_nlinear(&chart, seed);
        let frame = Frame::new(&chart, &conn);
        let nl = &conn.nl;
        let dt = |x: &Expr, c: usize| nl.delta_dt(&chart, x, c);
        let dx = |x: &Expr, k: usize| nl.delta_dx(&chart, x, k);
        let dp = |x: &Expr, c: usize, k: usize| x.diff(chart.p(c, k));

        let yt = vector(&chart, Temporal, 10 + seed);
        let ys = vector(&chart, Spatial, 20 + seed);
        let yv = vector(&chart, Vertical, 30 + seed);

        let (t_t, t_m, t_v) = (cov_deriv_h_t(&yt, &frame), cov_deriv_h_m(&yt, &frame), cov_deriv_v(&yt, &frame));
        for a in 0..m {
            for c in 0..m {
                let s: Vec<Expr> = (0..m).map(|b| yt.get(&[b]) * conn.a_t.get(&[a, b, c])).collect();
                assert_eq!(t_t.get(&[a, c]), &(dt(yt.get(&[a]), c) + Expr::sum(s)));
            }
            for k in 0..n {
                let s: Vec<Expr> = (0..m).map(|b| yt.get(&[b]) * conn.h_t.get(&[a, b, k])).collect();
                assert_eq!(t_m.get(&[a, k]), &(dx(yt.get(&[a]), k) + Expr::sum(s)));
            }
            for (c, k) in pairs(m, n) {
                let s: Vec<Expr> = (0..m).map(|b| yt.get(&[b]) * conn.c_t.get(&[a, b, c, k])).collect();
                assert_eq!(t_v.get(&[a, c * n + k]), &(dp(yt.get(&[a]), c, k) + Expr::sum(s)));
            }
        }

        let (s_t, s_m, s_v) = (cov_deriv_h_t(&ys, &frame), cov_deriv_h_m(&ys, &frame), cov_deriv_v(&ys, &frame));
        for i in 0..n {
            for c in 0..m {
                let s: Vec<Expr> = (0..n).map(|j| ys.get(&[j]) * conn.a_s.get(&[i, j, c])).collect();
                assert_eq!(s_t.get(&[i, c]), &(dt(ys.get(&[i]), c) + Expr::sum(s)));
            }
            for k in 0..n {
                let s: Vec<Expr> = (0..n).map(|j| ys.get(&[j]) * conn.h_s.get(&[i, j, k])).collect();
                assert_eq!(s_m.get(&[i, k]), &(dx(ys.get(&[i]), k) + Expr::sum(s)));
            }
            for (c, k) in pairs(m, n) {
                let s: Vec<Expr> = (0..n).map(|j| ys.get(&[j]) * conn.c_s.get(&[i, j, c, k])).collect();
                assert_eq!(s_v.get(&[i, c * n + k]), &(dp(ys.get(&[i]), c, k) + Expr::sum(s)));
            }
        }

        let (v_t, v_m, v_v) = (cov_deriv_h_t(&yv, &frame), cov_deriv_h_m(&yv, &frame), cov_deriv_v(&yv, &frame));
        for (a, i) in pairs(m, n) {
            let y = yv.get(&[a * n + i]);
            let sum = |f: &dyn Fn(usize, usize) -> Expr| Expr::sum(pairs(m, n).into_iter().map(|(b, j)| f(b, j)));
            for c in 0..m {
                let s = sum(&|b, j| yv.get(&[b * n + j]) * conn.a_v.get(&[a, i, b, j, c]));
                assert_eq!(v_t.get(&[a * n + i, c]), &(dt(y, c) - s));
            }
            for k in 0..n {
                let s = sum(&|b, j| yv.get(&[b * n + j]) * conn.h_v.get(&[a, i, b, j, k]));
                assert_eq!(v_m.get(&[a * n + i, k]), &(dx(y, k) - s));
            }
            for (c, k) in pairs(m, n) {
                let s = sum(&|b, j| yv.get(&[b * n + j]) * conn.c_v.get(&[a, i, b, j, c, k]));
                assert_eq!(v_v.get(&[a * n + i, c * n + k]), &(dp(y, c, k) - s));
            }
        }
    }
}

fn pairs(m: usize, n: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|a| (0..n).map(move |i| (a, i))).collect()
}

#[test]
fn constant_scalar_has_zero_derivatives() {
    let chart = JetChart::new(2, 2).unwrap();
    let frame = Frame::new(&chart, &random_nlinear(&chart, 9));
    let one = DTensor::scalar(Expr::one());
    for class in [Temporal, Spatial, Vertical] {
        let d = one.cov_deriv(&frame, class);
        assert!(d.components().is_zero());
        assert_eq!(d.slots(), &[IndexSlot::down(class)]);
    }
}

#[test]
fn derivative_examples() {
    let (chart, hn) = flat(1, 1);
    let frame = Frame::new(&chart, &complete_hnormal(&hn));
    let y = DTensor::from_fn(1, 1, vec![IndexSlot::up(Vertical)], |_| e(&chart, "p1_1"));
    assert!(cov_deriv_h_t(&y, &frame).get(&[0, 0]).is_zero());

    let (chart, hn) = sphere();
    let frame = Frame::new(&chart, &complete_hnormal(&hn));
    let y = DTensor::from_fn(1, 2, vec![IndexSlot::up(Spatial)], |x| Expr::int((x[0] == 0) as i64));
    let d = cov_deriv_h_m(&y, &frame);
    assert_eq!(d.get(&[1, 1]), &e(&chart, "cos(x1)/sin(x1)"));
    assert!(d.get(&[0, 0]).is_zero());
    for i in 0..2 {
        for k in 0..2 {
            assert_eq!(d.get(&[i, k]), hn.h_s.get(&[i, 0, k]));
        }
    }

    // Y^{(a)}_{(i)} = p^a_i with C = 0: the Kronecker product.
    let (chart, hn) = flat(2, 2);
    let frame = Frame::new(&chart, &complete_hnormal(&hn));
    let y = DTensor::from_fn(2, 2, vec![IndexSlot::up(Vertical)], |x| Expr::symbol(chart.p(x[0] / 2, x[0] % 2)));
    let d = cov_deriv_v(&y, &frame);
    for_each_index(&[4, 4], |x| {
        assert_eq!(d.get(x), &Expr::int((x[0] == x[1]) as i64), "{x:?}");
    });
}

#[test]
fn slot_bookkeeping() {
    let chart = JetChart::new(2, 3).unwrap();
    let frame = Frame::new(&chart, &random_nlinear(&chart, 4));
    let slots = vec![IndexSlot::up(Vertical), IndexSlot::down(Temporal), IndexSlot::down(Spatial)];
    let t = field(&chart, slots.clone(), 1);
    assert_eq!(t.components().len(), 6 * 2 * 3);
    for (class, range) in [(Temporal, 2), (Spatial, 3), (Vertical, 6)] {
        let d = t.cov_deriv(&frame, class);
        let mut want = slots.clone();
        want.push(IndexSlot::new(class, Variance::Covariant));
        assert_eq!(d.slots(), want.as_slice());
        assert_eq!(d.components().dims(), &[6, 2, 3, range]);
        assert_eq!(IndexSlot::up(class).range(2, 3), range);
    }
}

fn contraction(a: &[Expr], b: &[Expr]) -> Expr {
    Expr::sum(a.iter().zip(b).map(|(x, y)| x * y))
}

fn scalar_derivative(frame: &Frame, f: &Expr, class: IndexClass, g: usize) -> Expr {
    DTensor::scalar(f.clone()).cov_deriv(frame, class).get(&[g]).clone()
}

/// Components `t[.., g]` of a rank-2 derivative.
fn column(t: &DTensor, g: usize) -> Vec<Expr> {
    (0..t.components().dims()[0]).map(|x| t.get(&[x, g]).clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// deriv(f·T) = δf·T + f·deriv(T) on every slot class.
    #[test]
    fn leibniz_on_scalars(seed in 0u64..1000) {
        let chart = JetChart::new(2, 2).unwrap();
        let frame = Frame::new(&chart, &random_nlinear(&chart, seed));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_poly(&mut rng, &chart, 2);
        let slots = vec![IndexSlot::up(Vertical), IndexSlot::down(Spatial)];
        let t = field(&chart, slots.clone(), seed + 1);
        let ft = DTensor::from_fn(2, 2, slots, |x| &f * t.get(x));
        for class in [Temporal, Spatial, Vertical] {
            let (dft, dt) = (ft.cov_deriv(&frame, class), t.cov_deriv(&frame, class));
            let mut ok = true;
            for_each_index(dft.components().dims(), |x| {
                let g = x[x.len() - 1];
                let df = scalar_derivative(&frame, &f, class, g);
                let (head, _) = x.split_at(x.len() - 1);
                ok &= dft.get(x) == &(&df * t.get(head) + &f * dt.get(x));
            });
            prop_assert!(ok, "{:?}", class);
        }
    }

    /// A full contraction of a covariant and a contravariant slot of the same
    /// class differentiates as a scalar; this pins the covariant rules.
    #[test]
    fn contraction_commutes_with_derivatives(seed in 0u64..1000) {
        let chart = JetChart::new(2, 2).unwrap();
        let frame = Frame::new(&chart, &random_nlinear(&chart, seed));
        for slot_class in [Temporal, Spatial, Vertical] {
            let up = field(&chart, vec![IndexSlot::up(slot_class)], seed + 2);
            let down = field(&chart, vec![IndexSlot::down(slot_class)], seed + 3);
            let (u, d) = (up.components().data(), down.components().data());
            let s = contraction(u, d);
            for class in [Temporal, Spatial, Vertical] {
                let (du, dd) = (up.cov_deriv(&frame, class), down.cov_deriv(&frame, class));
                for g in 0..IndexSlot::up(class).range(2, 2) {
                    let lhs = scalar_derivative(&frame, &s, class, g);
                    let rhs = contraction(&column(&du, g), d) + contraction(u, &column(&dd, g));
                    prop_assert_eq!(lhs, rhs, "{:?} along {:?}", slot_class, class);
                }
            }
        }
    }
}
