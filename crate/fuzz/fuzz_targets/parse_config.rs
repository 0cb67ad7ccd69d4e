#![no_main]

use libfuzzer_sys::fuzz_target;
use nefluct_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_config(text) {
        // canonical text reparses to the same config
        let again = parse_config(&cfg.to_text()).expect("canonical form must parse");
        assert_eq!(cfg, again);
    }
});
