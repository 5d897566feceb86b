#![no_main]

use dualjet::chart::JetChart;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let chart = JetChart::new(2, 2).unwrap();
    // Accepted input must print back to the same expression.
    if let Ok(e) = chart.parse_expr(text) {
        let again = chart.parse_expr(&e.to_string()).expect("display output parses");
        assert_eq!(again, e);
    }
});
