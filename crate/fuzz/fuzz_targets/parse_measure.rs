#![no_main]

use cesaro_core::parse_measure;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(mu) = parse_measure(text) {
        let shown = mu.to_string();
        let again = parse_measure(&shown).expect("displayed measure parses");
        assert_eq!(again.to_string(), shown);
    }
});
