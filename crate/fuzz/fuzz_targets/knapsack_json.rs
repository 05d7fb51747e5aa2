#![no_main]

use ameso::format::{parse_knapsack_json, write_knapsack_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(k) = parse_knapsack_json(s) {
        assert_eq!(parse_knapsack_json(&write_knapsack_json(&k)).unwrap(), k);
        // every feasible point has a cost
        let d = k.domain();
        let _ = k.cost(d.axis(0).hi(), d.axis(1).hi()).unwrap();
    }
});
