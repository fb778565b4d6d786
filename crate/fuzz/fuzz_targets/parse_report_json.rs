#![no_main]

use cesaro_core::criteria::{CriterionRecord, TheoremReport};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rec) = serde_json::from_slice::<CriterionRecord>(data) {
        let text = serde_json::to_string(&rec).unwrap();
        let again: CriterionRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), text);
    }
    if let Ok(report) = serde_json::from_slice::<TheoremReport>(data) {
        let text = serde_json::to_string(&report).unwrap();
        let again: TheoremReport = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&again).unwrap(), text);
    }
});
