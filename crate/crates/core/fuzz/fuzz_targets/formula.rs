#![no_main]

use dagsolve::io::{parse_formula, write_formula};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let colors: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    if let Ok(f) = parse_formula(text, &colors) {
        let printed = write_formula(&f, &colors);
        assert_eq!(parse_formula(&printed, &colors).expect("printed formulas parse"), f);
    }
});
