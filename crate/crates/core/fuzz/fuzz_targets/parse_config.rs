#![no_main]

use libfuzzer_sys::fuzz_target;
use satiab::expcli::{config_to_json, parse_config};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // anything that parses must survive a write/parse round trip unchanged
    if let Ok(cfg) = parse_config(text, "fuzz") {
        let again = parse_config(&config_to_json(&cfg), "fuzz").expect("re-parse");
        assert_eq!(again, cfg);
    }
});
