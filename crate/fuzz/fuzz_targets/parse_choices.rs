#![no_main]
use libfuzzer_sys::fuzz_target;

use treejoint::io::{format_choices, parse_choices};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(choices) = parse_choices(s) {
        let text = format_choices(&choices).expect("parsed choices have a file form");
        assert_eq!(parse_choices(&text).unwrap(), choices);
    }
});
