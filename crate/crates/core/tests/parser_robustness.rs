//! The fuzz-target properties on stable: replay the checked-in corpus and
//! throw arbitrary text at both parsers.

use std::path::Path;

use dualjet::chart::JetChart;
use dualjet::cli::parse_config;
use proptest::prelude::*;

fn expr_property(text: &str) {
    let chart = JetChart::new(2, 2).unwrap();
    if let Ok(e) = chart.parse_expr(text) {
        assert_eq!(chart.parse_expr(&e.to_string()).unwrap(), e, "{text}");
    }
}

fn config_property(text: &str) {
    if let Ok(cfg) = parse_config(text) {
        assert_eq!(parse_config(&cfg.to_config_string()).unwrap(), cfg);
    }
}

fn corpus(name: &str) -> Vec<String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(name);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    out
}

#[test]
fn corpus_seeds_replay() {
    let exprs = corpus("parse_expr");
    assert!(exprs.len() >= 5);
    exprs.iter().for_each(|s| expr_property(s));
    let configs = corpus("parse_config");
    assert!(configs.iter().filter(|s| parse_config(s).is_ok()).count() >= 4);
    configs.iter().for_each(|s| config_property(s));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn expression_parser_never_panics(text in "[ -~]{0,40}") {
        expr_property(&text);
    }

    #[test]
    fn expression_like_text_round_trips(text in "([tx][12]|p[12]_[12]|[0-9]{1,3}|sin|cos|exp|[-+*/^()., ]){0,24}") {
        expr_property(&text);
    }

    #[test]
    fn config_parser_never_panics(text in "(\\[[a-z_]{0,16}\\]|[a-z]{1,5}(\\[[0-9]\\]){0,4} = [ -~]{0,12}|#[ -~]{0,8}|\n){0,12}") {
        config_property(&text);
    }

    #[test]
    fn mutated_configs_round_trip(pick in 0usize..4, at in any::<prop::sample::Index>(), insert in "[ -~\n]{0,6}", cut in 0usize..6) {
        let seeds: Vec<String> = corpus("parse_config").into_iter().filter(|s| parse_config(s).is_ok()).collect();
        let base = &seeds[pick % seeds.len()];
        let chars: Vec<char> = base.chars().collect();
        let i = at.index(chars.len());
        let end = (i + cut).min(chars.len());
        let text: String = chars[..i].iter().chain(insert.chars().collect::<Vec<_>>().iter()).chain(&chars[end..]).collect();
        config_property(&text);
    }
}
