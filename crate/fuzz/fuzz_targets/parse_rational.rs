#![no_main]

use libfuzzer_sys::fuzz_target;
use maass_core::exactalg::Rational;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = s.parse::<Rational>() {
            // printed form is canonical
            let back: Rational = r.to_string().parse().expect("reparse");
            assert_eq!(back, r);
        }
    }
});
