#![no_main]

use libfuzzer_sys::fuzz_target;
use maass_core::exactalg::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(f) = LaurentPoly::from_json(&v) {
        assert_eq!(LaurentPoly::from_json(&f.to_json()).unwrap(), f);
    }
});
