#![no_main]

use exitbound::cli::parse_epsilons;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(eps) = parse_epsilons(text) {
            assert!(!eps.is_empty());
            assert!(eps.iter().all(|e| *e > 0.0 && e.is_finite()));
        }
    }
});
