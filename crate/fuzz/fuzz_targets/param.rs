#![no_main]

use gcplab_cli::parse::parse_param;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((key, value)) = parse_param(text) {
        assert!(!key.is_empty());
        assert!(value.is_finite());
    }
});
