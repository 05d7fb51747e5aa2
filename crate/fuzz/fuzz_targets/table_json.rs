#![no_main]

use ameso::format::{parse_table_json, write_table_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_table_json(s) {
        assert_eq!(parse_table_json(&write_table_json(&t)).unwrap(), t);
    }
});
