#![no_main]
use libfuzzer_sys::fuzz_target;

use treejoint::io::{format_joint, parse_joint};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(joint) = parse_joint(s) {
        assert_eq!(parse_joint(&format_joint(&joint)).unwrap(), joint);
    }
});
