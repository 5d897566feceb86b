#![no_main]

use dualjet::cli::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            let canonical = cfg.to_config_string();
            assert_eq!(parse_config(&canonical).expect("canonical config parses"), cfg);
        }
    }
});
