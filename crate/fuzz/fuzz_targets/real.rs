#![no_main]

use hvh_cli::config::parse_real_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(values) = parse_real_list(text) {
        assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
    }
});
