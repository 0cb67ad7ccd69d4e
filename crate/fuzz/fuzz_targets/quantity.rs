#![no_main]

use libfuzzer_sys::fuzz_target;
use nefluct_cli::parse_quantity;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_quantity(text) {
        assert!(q.si.is_finite());
    }
});
