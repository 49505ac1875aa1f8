#![no_main]

use hvh_cli::parse_sweep_csv;
use hvh_cli::table::write_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rows) = parse_sweep_csv(text) {
        let again = write_csv(&rows).expect("parsed rows re-encode");
        assert_eq!(parse_sweep_csv(&again).expect("re-encoded rows parse"), rows);
    }
});
