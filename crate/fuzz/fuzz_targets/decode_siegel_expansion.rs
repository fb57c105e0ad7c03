#![no_main]

use libfuzzer_sys::fuzz_target;
use maass_core::qexp::SiegelExpansion2;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(e) = SiegelExpansion2::from_json(&v) {
        assert_eq!(SiegelExpansion2::from_json(&e.to_json()).unwrap().to_json(), e.to_json());
    }
});
