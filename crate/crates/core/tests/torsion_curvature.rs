mod common;

use common::{assert_oracle_equivalence, check_berwald_closed_forms, curved_pair, e, flat, random_cartan, random_nlinear, sphere, two_spheres};
use dualjet::chart::JetChart;
use dualjet::connections::complete_hnormal;
use dualjet::identities::Mode;
use dualjet::symbolic::Expr;
use dualjet::torsion_curvature::{
    curvature_closed_form, curvature_from_definition, torsion_closed_form, torsion_from_definition,
};

#[test]
fn flat_berwald_is_flat() {
    for (m, n) in [(1, 1), (2, 2)] {
        let (chart, hn) = flat(m, n);
        assert!(torsion_closed_form(&chart, &hn).is_zero());
        assert!(curvature_closed_form(&chart, &hn).is_zero());
        let conn = complete_hnormal(&hn);
        assert!(torsion_from_definition(&chart, &conn).components.is_zero());
        assert!(curvature_from_definition(&chart, &conn).components.is_zero());
    }
}

#[test]
fn berwald_closed_forms_on_curved_pairs() {
    let (chart, hn) = curved_pair();
    check_berwald_closed_forms(&chart, &hn, &["1", "t1^2"], &["1", "sin(x1)^2"]);
    let (chart, hn) = two_spheres();
    check_berwald_closed_forms(&chart, &hn, &["1", "sin(t1)^2"], &["1", "sin(x1)^2"]);
    let (chart, hn) = sphere();
    check_berwald_closed_forms(&chart, &hn, &["1"], &["1", "sin(x1)^2"]);
}

#[test]
fn sphere_values() {
    let (chart, hn) = sphere();
    let c = curvature_closed_form(&chart, &hn);
    // With R^l_ijk = δH^l_ij/δx^k − δH^l_ik/δx^j + …, the unit sphere has
    // R^1_212 = −sin²(x1) and R^1_221 = sin²(x1).
    assert_eq!(c.r_ijk.get(&[0, 1, 0, 1]), &e(&chart, "0 - sin(x1)^2"));
    assert_eq!(c.r_ijk.get(&[0, 1, 1, 0]), &e(&chart, "sin(x1)^2"));
    assert_eq!(c.r_ijk.get(&[1, 0, 0, 1]), &Expr::one());
    // R^{(1)}_{(r)12} = −𝓡^s_{r12} p^1_s
    let t = torsion_closed_form(&chart, &hn);
    assert_eq!(t.r_ij.get(&[0, 0, 0, 1]), &e(&chart, "-p1_2"));
    assert_eq!(t.r_ij.get(&[0, 1, 0, 1]), &e(&chart, "sin(x1)^2*p1_1"));

    let (chart, hn) = two_spheres();
    let c = curvature_closed_form(&chart, &hn);
    assert_eq!(c.chi.get(&[0, 1, 0, 1]), &e(&chart, "0 - sin(t1)^2"));
}

#[test]
fn oracle_equivalence_on_berwald_instances() {
    for (label, (chart, hn)) in [("sphere", sphere()), ("pair", curved_pair()), ("two spheres", two_spheres())] {
        assert_oracle_equivalence(&chart, &hn, label);
    }
}

#[test]
fn oracle_equivalence_on_random_cartan_connections() {
    for seed in 1..=5 {
        let (chart, hn) = random_cartan(seed);
        assert_oracle_equivalence(&chart, &hn, &format!("seed {seed}"));
    }
}

#[test]
fn oracle_flags_a_connection_that_is_not_h_normal() {
    let chart = JetChart::new(1, 1).unwrap();
    let conn = random_nlinear(&chart, 3);
    let td = torsion_from_definition(&chart, &conn);
    let cd = curvature_from_definition(&chart, &conn);
    assert!(!td.structural_mismatches.is_empty());
    assert!(!cd.structural_mismatches.is_empty());
}

#[test]
fn antisymmetries_hold() {
    let cases = vec![sphere(), curved_pair(), two_spheres(), random_cartan(1), random_cartan(2)];
    for (chart, hn) in cases {
        let t = torsion_closed_form(&chart, &hn);
        let c = curvature_closed_form(&chart, &hn);
        let (rt, rc) = (t.antisymmetry_residuals(), c.antisymmetry_residuals());
        assert!(rt.all_symbolic_zero() && rc.all_symbolic_zero());
        assert_eq!(rt.ids(), vec!["torsion.R_ab", "torsion.R_ij", "torsion.S", "torsion.T_ij"]);
        assert_eq!(rc.ids(), vec!["curvature.R_ibc", "curvature.R_ijk", "curvature.S", "curvature.chi"]);
        assert!(t.antisymmetry_violations().is_empty() && c.antisymmetry_violations().is_empty());
    }
}

#[test]
fn antisymmetry_violation_is_reported() {
    let (chart, hn) = random_cartan(3);
    let mut t = torsion_closed_form(&chart, &hn);
    let x = t.r_ab.get(&[0, 0, 0, 1]) + &Expr::one();
    t.r_ab.set(&[0, 0, 0, 1], x);
    assert!(t.antisymmetry_violations().iter().any(|(name, _)| *name == "R_ab"));
    assert_eq!(t.antisymmetry_residuals().failing_ids(Mode::Symbolic, 1e-9), vec!["torsion.R_ab"]);
}
