#![no_main]

use cesaro_core::PowerSeries;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = PowerSeries::read_csv(data, 4096) {
        let mut out = Vec::new();
        f.write_csv(&mut out).expect("write to memory");
        let g = PowerSeries::read_csv(out.as_slice(), 4096).expect("written csv parses");
        assert_eq!(f, g);
    }
});
