#![no_main]

use ameso::format::parse_domain;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(d) = parse_domain(s) {
        let again = parse_domain(&d.to_string()).expect("display output parses");
        assert_eq!(again, d);
    }
});
