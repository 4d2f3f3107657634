#![no_main]

use exitbound::MapSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(map) = serde_json::from_slice::<MapSpec>(data) {
        if map.validate().is_ok() {
            for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let _ = map.eval(x);
                let _ = map.derivative(x);
            }
            let _ = map.kinks();
        }
    }
});
