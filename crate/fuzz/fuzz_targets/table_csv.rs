#![no_main]

use ameso::format::{parse_table_csv, write_table_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_table_csv(s) {
        let text = write_table_csv(&t).unwrap();
        assert_eq!(parse_table_csv(&text).unwrap(), t);
    }
});
