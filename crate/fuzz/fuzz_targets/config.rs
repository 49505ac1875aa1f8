#![no_main]

use hvh_cli::{parse_config, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(overrides) = parse_config(text) {
        // applying parsed overrides must not panic, valid or not
        let _ = overrides.apply(RunConfig::default()).validate();
    }
});
