#![no_main]

use cesaro_core::config::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ExperimentConfig::parse(text, 1 << 14) {
        let _ = cfg.parsed_measures();
        let again = ExperimentConfig::parse(&cfg.to_toml().unwrap(), 1 << 14).expect("serialized config parses");
        assert_eq!(again, cfg);
    }
});
