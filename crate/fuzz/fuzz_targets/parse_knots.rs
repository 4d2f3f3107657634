#![no_main]

use exitbound::cli::parse_knots;
use exitbound::MapSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(knots) = parse_knots(text) {
            let map = MapSpec::Tabulated { knots };
            let _ = map.eval(0.0);
            let _ = map.kinks();
        }
    }
});
