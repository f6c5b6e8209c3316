#![no_main]
use libfuzzer_sys::fuzz_target;

use treejoint::io::{format_instance, parse_instance};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(model) = parse_instance(s) {
        let again = parse_instance(&format_instance(&model)).expect("formatted instance parses");
        assert_eq!(model, again);
        let _ = model.check_consistency();
    }
});
