#![no_main]

use exitbound::cli::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            // resolution validates every field; it must error, not panic
            let _ = cfg.resolved();
        }
    }
});
