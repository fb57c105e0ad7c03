#![no_main]

use libfuzzer_sys::fuzz_target;
use maass_core::qexp::JacobiExpansion;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(e) = JacobiExpansion::from_json(&v) {
        let again = JacobiExpansion::from_json(&e.to_json()).unwrap();
        assert_eq!(again.to_json(), e.to_json());
    }
});
