mod common;

use common::{curved_pair, diag, e, flat, random_cartan, sphere};
use dualjet::chart::{JetChart, TemporalMetric};
use dualjet::connections::{
    berwald_connection, complete_hnormal, is_cartan, normalization_residuals, normalization_tensor,
    verify_normalization, Block, HNormalConnection, NotHNormal, Perturbation, RandomCartan,
};
use dualjet::identities::Mode;
use dualjet::symbolic::{Expr, Rational};
use dualjet::tensor::for_each_index;

fn delta(a: usize, b: usize) -> bool {
    a == b
}

fn first_index(b: Block, m: usize, n: usize) -> Vec<usize> {
    vec![0; b.shape(m, n).len()]
}

#[test]
fn completion_of_berwald_matches_the_closed_blocks() {
    for (chart, hn) in [curved_pair(), sphere()] {
        let (m, n) = (chart.m(), chart.n());
        let conn = complete_hnormal(&hn);
        for_each_index(&[m, n, m, n, m], |x| {
            let (a, i, b, j, c) = (x[0], x[1], x[2], x[3], x[4]);
            let want = if delta(i, j) { -hn.chi.get(a, b, c) } else { Expr::zero() };
            assert_eq!(conn.a_v.get(x), &want, "A_v {x:?}");
        });
        for_each_index(&[m, n, m, n, n], |x| {
            let (a, i, b, j, k) = (x[0], x[1], x[2], x[3], x[4]);
            let want = if delta(a, b) { hn.h_s.get(&[j, i, k]).clone() } else { Expr::zero() };
            assert_eq!(conn.h_v.get(x), &want, "H_v {x:?}");
        });
        for b in [Block::Ct, Block::Cs, Block::Cv, Block::Ht, Block::As] {
            assert!(conn.block(b).is_zero(), "{}", b.name());
        }
        assert_eq!(conn.a_t.data(), hn.chi.iter().cloned().collect::<Vec<_>>().as_slice());
    }
}

#[test]
fn completion_examples() {
    let (chart, hn) = flat(2, 2);
    let conn = complete_hnormal(&hn);
    for b in Block::ALL {
        assert!(conn.block(b).is_zero(), "{}", b.name());
    }

    let chart1 = JetChart::new(1, 1).unwrap();
    let h = TemporalMetric::new(&chart1, vec![vec![e(&chart1, "exp(2*t1)")]]).unwrap();
    let mut hn = berwald_connection(&h, &dualjet::chart::SpatialMetric::identity(&chart1), &chart1);
    assert_eq!(hn.chi.get(0, 0, 0), &Expr::one());
    hn.a.set(&[0, 0, 0], Expr::int(2));
    assert_eq!(complete_hnormal(&hn).a_v.get(&[0, 0, 0, 0, 0]), &Expr::one());
    let _ = chart;
}

#[test]
fn kronecker_structure() {
    for seed in 1..=3 {
        let (chart, hn) = random_cartan(seed);
        let (m, n) = (chart.m(), chart.n());
        let conn = complete_hnormal(&hn);
        for_each_index(&[m, n, m, n, m], |x| {
            let (a, i, b, j, c) = (x[0], x[1], x[2], x[3], x[4]);
            let got = conn.a_v.get(x);
            if a != b && i == j {
                // −δ^j_i χ^a_bc survives off the a = b diagonal
                assert_eq!(got, &-hn.chi.get(a, b, c));
            } else if a == b && i != j {
                assert_eq!(got, hn.a.get(&[j, i, c]));
            } else if a != b {
                assert!(got.is_zero());
            }
        });
        for_each_index(&[m, n, m, n, m, n], |x| {
            let want = if x[0] == x[2] { hn.c.get(&[x[3], x[1], x[4], x[5]]).clone() } else { Expr::zero() };
            assert_eq!(conn.c_v.get(x), &want);
        });
    }
}

#[test]
fn berwald_examples() {
    let (chart, hn) = flat(1, 1);
    assert!(hn.a.is_zero() && hn.h_s.is_zero() && hn.c.is_zero() && hn.chi.iter().all(Expr::is_zero));
    let _ = chart;

    let (chart, hn) = sphere();
    assert_eq!(hn.h_s.get(&[0, 1, 1]), &e(&chart, "-sin(x1)*cos(x1)"));
    assert!(hn.a.is_zero() && hn.c.is_zero());

    let (chart, hn) = curved_pair();
    assert_eq!(hn.chi.get(1, 0, 1), &e(&chart, "1/t1"));
}

#[test]
fn cartan_predicate() {
    for (_, hn) in [sphere(), curved_pair(), flat(2, 3)] {
        assert!(is_cartan(&hn));
    }
    let (chart, mut hn) = flat(1, 2);
    hn.h_s.set(&[0, 0, 1], e(&chart, "x1"));
    assert!(!hn.is_cartan());

    let (chart, mut hn) = flat(1, 2);
    hn.c.set(&[0, 0, 0, 1], e(&chart, "p1_1"));
    hn.c.set(&[1, 0, 0, 0], e(&chart, "p1_1"));
    assert!(hn.is_cartan());
    hn.c.set(&[1, 0, 0, 0], Expr::zero());
    assert!(!hn.is_cartan());
}

#[test]
fn random_cartan_generator() {
    let (chart, a) = random_cartan(7);
    let (_, b) = random_cartan(7);
    let (_, c) = random_cartan(8);
    assert!(a.is_cartan() && c.is_cartan());
    assert_eq!(a.a, b.a);
    assert_eq!(a.c, b.c);
    assert_eq!(a.nl, b.nl);
    assert_ne!((a.a.clone(), a.h_s.clone()), (c.a.clone(), c.h_s.clone()));
    let h = TemporalMetric::new(&chart, diag(&chart, &["1", "t1^2"])).unwrap();
    let dense = RandomCartan { density: 1.0, ..RandomCartan::with_seed(3) }.generate(&chart, &h);
    assert!(dense.a.data().iter().all(|x| !x.is_zero()));
    for x in dense.a.data() {
        for s in x.free_symbols() {
            assert!(chart.lookup(s.name()).is_some());
        }
    }
}

#[test]
fn normalization_tensor_structure() {
    let (chart, hn) = curved_pair();
    let (m, n) = (chart.m(), chart.n());
    let j = normalization_tensor(&chart, &hn.h);
    for_each_index(&[m * n, m, n], |x| {
        let (a, i, b, jj) = (x[0] / n, x[0] % n, x[1], x[2]);
        let want = if i == jj { hn.h.h[a][b].clone() } else { Expr::zero() };
        assert_eq!(j.get(x), &want);
    });
}

#[test]
fn h_normal_connections_are_normalized() {
    let cases: Vec<(JetChart, HNormalConnection)> =
        vec![flat(1, 1), sphere(), curved_pair(), random_cartan(1), random_cartan(2), random_cartan(5)];
    for (chart, hn) in cases {
        let r = verify_normalization(&chart, &hn);
        assert!(r.all_symbolic_zero(), "{:?}", r.failing_ids(Mode::Symbolic, 0.0));
        assert_eq!(r.ids(), vec!["J/g", "J|(g)(s)", "J|s"]);
    }
}

#[test]
fn perturbing_any_block_breaks_normalization() {
    let (chart, hn) = curved_pair();
    let (m, n) = (chart.m(), chart.n());
    for b in Block::ALL {
        let mut conn = complete_hnormal(&hn);
        conn.perturb(&Perturbation { block: b, index: first_index(b, m, n), delta: Rational::from_int(1) });
        let r = normalization_residuals(&chart, &hn.h, &conn);
        assert!(!r.all_symbolic_zero(), "{}", b.name());
    }
    // +1 on A_v shows up in the /g family.
    let mut conn = complete_hnormal(&hn);
    conn.perturb(&Perturbation { block: Block::Av, index: vec![0, 0, 0, 1, 0], delta: Rational::from_int(1) });
    let r = normalization_residuals(&chart, &hn.h, &conn);
    assert_eq!(r.failing_ids(Mode::Symbolic, 0.0), vec!["J/g"]);
}

#[test]
fn effective_perturbations_stay_normalized() {
    let (chart, hn) = sphere();
    for b in [Block::As, Block::Hs, Block::Cs] {
        let p = Perturbation { block: b, index: first_index(b, 1, 2), delta: Rational::from_int(1) };
        let r = verify_normalization(&chart, &hn.perturbed(&p).unwrap());
        assert!(r.all_symbolic_zero(), "{}", b.name());
    }
    assert!(hn.perturbed(&Perturbation { block: Block::Av, index: vec![0; 5], delta: Rational::from_int(1) }).is_none());
}

#[test]
fn recover_effective_blocks() {
    let (chart, hn) = random_cartan(4);
    let back = HNormalConnection::from_nlinear(&chart, &hn.h, &complete_hnormal(&hn)).unwrap();
    assert_eq!((back.a, back.h_s, back.c), (hn.a.clone(), hn.h_s.clone(), hn.c.clone()));

    let mut conn = complete_hnormal(&hn);
    conn.perturb(&Perturbation { block: Block::Hv, index: vec![0, 0, 1, 0, 0], delta: Rational::from_int(1) });
    assert_eq!(HNormalConnection::from_nlinear(&chart, &hn.h, &conn).unwrap_err(), NotHNormal("H_v"));

    let mut conn = complete_hnormal(&hn);
    conn.perturb(&Perturbation { block: Block::At, index: vec![0, 0, 0], delta: Rational::from_int(1) });
    assert_eq!(HNormalConnection::from_nlinear(&chart, &hn.h, &conn).unwrap_err(), NotHNormal("A_t"));
}

#[test]
fn block_names_round_trip() {
    for b in Block::ALL {
        assert_eq!(Block::from_name(b.name()), Some(b));
    }
    assert_eq!(Block::Cv.shape(2, 3), vec![2, 3, 2, 3, 2, 3]);
}
