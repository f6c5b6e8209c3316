#![no_main]
use libfuzzer_sys::fuzz_target;

use treejoint::io::ResultFile;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(result) = ResultFile::parse_text(s) {
        assert_eq!(ResultFile::parse_text(&result.to_text()).unwrap(), result);
        let json = ResultFile::parse_json(&result.to_json()).unwrap();
        assert_eq!(json.rationals(), result.rationals());
    }
});
