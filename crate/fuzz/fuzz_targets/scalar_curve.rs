#![no_main]

use libfuzzer_sys::fuzz_target;
use nefluct_cli::ScalarCurve;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = ScalarCurve::parse(text) {
        let again = ScalarCurve::parse(&curve.to_csv()).expect("written curve must parse");
        assert_eq!(curve.body(), again.body());
    }
});
