mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::e;
use dualjet::chart::{christoffel_spatial, JetChart};
use dualjet::cli::{json_report, latex_report, load_config, parse_config, run, text_summary, Check, ConfigError, ConnectionSpec};
use dualjet::connections::Block;
use dualjet::identities::Mode;
use dualjet::tensor::for_each_index;
use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

const FLAT: &str = "[manifold]\nm = 1\nn = 1\n\n[temporal_metric]\nh[1][1] = 1\n\n[spatial_metric]\nphi[1][1] = 1\n\n[connection]\nkind = berwald\n\n[verify]\nchecks = all\n";

#[test]
fn minimal_flat_config() {
    let cfg = parse_config(FLAT).unwrap();
    assert_eq!((cfg.time.len(), cfg.space.len()), (1, 1));
    assert_eq!(cfg.connection, ConnectionSpec::Berwald);
    assert_eq!(cfg.checks, Check::ALL.to_vec());
    assert_eq!(cfg.mode, Mode::Both);
    assert!(cfg.perturbation.is_none());
}

#[test]
fn sphere_config_gives_the_sphere_christoffels() {
    let cfg = load_config(&configs().join("sphere.cfg")).unwrap();
    let chart = cfg.chart();
    assert_eq!(chart.x(0).name(), "theta");
    let g = christoffel_spatial(&chart, &cfg.spatial_metric(&chart));
    assert_eq!(g.get(0, 1, 1), &e(&chart, "0 - sin(theta)*cos(theta)"));
    assert_eq!(g.get(1, 0, 1), &e(&chart, "cos(theta)/sin(theta)"));
    let hs = cfg.connection(&chart).h_s;
    for_each_index(&[2, 2, 2], |x| assert_eq!(hs.get(x), g.get(x[0], x[1], x[2])));
}

#[test]
fn config_errors() {
    let bad = FLAT.replace("phi[1][1] = 1", "phi[1][1] = 1 + y");
    match parse_config(&bad) {
        Err(ConfigError::UnknownCoordinate { name, field, line, .. }) => {
            assert_eq!(name, "y");
            assert_eq!(field, "phi[1][1]");
            assert_eq!(line, 9);
        }
        other => panic!("{other:?}"),
    }
    assert!(parse_config(&bad).unwrap_err().to_string().contains("`y`"));

    let bad = FLAT.replace("h[1][1] = 1", "h[1][1] = 1 +");
    assert!(matches!(parse_config(&bad), Err(ConfigError::Syntax { line: 6, .. })));

    let field = |text: &str| match parse_config(text) {
        Err(ConfigError::Invalid { field, .. }) => field,
        other => panic!("{other:?}"),
    };
    assert_eq!(field(&FLAT.replace("checks = all", "checks = all\ntol = 0")), "tol");
    assert_eq!(field(&FLAT.replace("checks = all", "checks = all\nsamples = 0")), "samples");
    assert_eq!(field(&FLAT.replace("checks = all", "checks =  ,")), "checks");
    assert_eq!(field(&FLAT.replace("n = 1", "n = 2")), "phi[2][2]");
    assert_eq!(field(&FLAT.replace("berwald", "berwald\nperturb A_t[1][1][1] = 1")), "perturb A_t[1][1][1]");
    assert!(matches!(parse_config("x = 1\n"), Err(ConfigError::Syntax { line: 1, .. })));
    assert!(matches!(load_config(Path::new("/nonexistent.cfg")), Err(ConfigError::Io { .. })));
}

#[test]
fn canonical_config_round_trips() {
    for name in ["flat.cfg", "sphere.cfg", "sphere_fault.cfg", "random_cartan.cfg"] {
        let cfg = load_config(&configs().join(name)).unwrap();
        let text = cfg.to_config_string();
        assert_eq!(parse_config(&text).unwrap(), cfg, "{name}");
        assert_eq!(parse_config(&text).unwrap().to_config_string(), text);
    }
    let cfg = load_config(&configs().join("sphere_fault.cfg")).unwrap();
    let p = cfg.perturbation.as_ref().unwrap();
    assert_eq!((p.block, p.index.clone()), (Block::Hs, vec![0, 1, 1]));
}

#[test]
fn explicit_blocks_round_trip() {
    let text = "[manifold]\ntime = t\nspace = x, y\n\n[temporal_metric]\nh[1][1] = 1\n\n[spatial_metric]\nphi[1][1] = 1\nphi[2][2] = 1\n\n[connection]\nkind = explicit\nH[1][2][2] = x*p1_1\nC[1][1][1][2] = p1_1\nC[2][1][1][1] = p1_1\nA[2][1][1] = 3/2\n\n[verify]\nchecks = ricci\n";
    let cfg = parse_config(text).unwrap();
    let chart = cfg.chart();
    let hn = cfg.connection(&chart);
    assert_eq!(hn.h_s.get(&[0, 1, 1]), &e(&chart, "x*p1_1"));
    assert!(hn.is_cartan());
    assert_eq!(parse_config(&cfg.to_config_string()).unwrap(), cfg);
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn reports_are_deterministic() {
    let cfg = load_config(&configs().join("random_cartan.cfg")).unwrap();
    let a = serde_json::to_value(json_report(&run(&cfg))).unwrap();
    let b = serde_json::to_value(json_report(&run(&cfg))).unwrap();
    assert_eq!(without_timing(a.clone()), without_timing(b));
    for key in ["config_digest", "seed", "checks"] {
        assert!(a.get(key).is_some(), "{key}");
    }
    for c in a["checks"].as_array().unwrap() {
        for key in ["name", "status", "instances_total", "instances_failed", "max_numeric_residual"] {
            assert!(c.get(key).is_some(), "{key}");
        }
    }
    let mut other = cfg.clone();
    other.seed += 1;
    assert_ne!(json_report(&run(&other)).config_digest, a["config_digest"]);
}

#[test]
fn sphere_bianchi_symbolic() {
    let mut cfg = load_config(&configs().join("sphere.cfg")).unwrap();
    cfg.checks = vec![Check::Bianchi];
    cfg.mode = Mode::Symbolic;
    let out = run(&cfg);
    assert_eq!(out.exit_code(), 0);
    let b = &out.check(Check::Bianchi).unwrap().report;
    assert_eq!(b.ids().len(), 30);
    assert!(b.all_symbolic_zero());
    assert!(text_summary(&out).contains("bianchi"));
}

#[test]
fn planted_fault_is_pinpointed() {
    let cfg = load_config(&configs().join("sphere_fault.cfg")).unwrap();
    let out = run(&cfg);
    assert_eq!(out.exit_code(), 1);
    let failing = |c: Check| out.check(c).unwrap().report.failing_ids(out.mode, out.tol);
    // ids carry the field: X0 is the Liouville field, X1.. polynomial fields
    let ricci = failing(Check::Ricci);
    assert!(ricci.contains(&"v.3:X0".to_string()) && ricci.contains(&"v.5:X0".to_string()));
    assert!(ricci.iter().all(|id| id.starts_with("hT.") || id.starts_with("hM.") || id.starts_with("v.")));
    assert_eq!(failing(Check::Deflection), vec!["defl.3", "defl.5", "delta_s"]);
    let json = serde_json::to_value(json_report(&out)).unwrap();
    let ricci = &json["checks"][0];
    assert_eq!(ricci["status"], "fail");
    assert_eq!(ricci["failing_ids"].as_array().unwrap().len(), ricci_len(&out));
    assert_eq!(json["checks"][1]["failing_ids"], serde_json::json!(["defl.3", "defl.5", "delta_s"]));
}

fn ricci_len(out: &dualjet::cli::RunOutcome) -> usize {
    out.check(Check::Ricci).unwrap().report.failing_ids(out.mode, out.tol).len()
}

#[test]
fn latex_uses_decorated_indices() {
    let mut cfg = load_config(&configs().join("sphere.cfg")).unwrap();
    cfg.checks = vec![Check::Torsion];
    let tex = latex_report(&run(&cfg));
    assert!(tex.contains(r"R_{(2)12}^{(1)} &= p^{1}_{1} - p^{1}_{1} \cos^{2}\left(\theta\right)"), "{tex}");
    assert!(tex.contains(r"R_{212}^{1} &= -1 + \cos^{2}\left(\theta\right)"));
    assert!(tex.contains("torsion & 26 & 0 & pass"));
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dualjet")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn exit_status_contract() {
    let path = |n: &str| configs().join(n).display().to_string();
    let report = scratch("flat.json");
    let summary = scratch("flat.txt");
    let (code, stdout) = binary(&[
        "--config",
        &path("flat.cfg"),
        "--report",
        report.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["passed"], true);
    assert_eq!(json["checks"].as_array().unwrap().len(), 7);
    assert_eq!(std::fs::read_to_string(&summary).unwrap(), stdout);

    let (code, _) = binary(&["--config", &path("sphere_fault.cfg"), "--quiet"]);
    assert_eq!(code, 1);
    let (code, stdout) =
        binary(&["--config", &path("sphere_fault.cfg"), "--check", "normalization", "--quiet"]);
    assert_eq!((code, stdout.as_str()), (0, ""));
    let (code, _) = binary(&["--config", &path("sphere.cfg"), "--check", "bianchi", "--mode", "symbolic", "--quiet"]);
    assert_eq!(code, 0);
    let (code, _) = binary(&["--config", "/nonexistent.cfg"]);
    assert_eq!(code, 2);
    let (code, _) = binary(&["--config", &path("flat.cfg"), "--check", "bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn chart_names_from_config() {
    let cfg = parse_config(FLAT).unwrap();
    let chart: JetChart = cfg.chart();
    assert_eq!(chart.t(0).name(), "t1");
    assert_eq!(chart.p(0, 0).name(), "p1_1");
}
