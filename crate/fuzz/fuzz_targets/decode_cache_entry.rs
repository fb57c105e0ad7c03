#![no_main]

use libfuzzer_sys::fuzz_target;
use maass_cli::cache::{decode_entry, encode_entry};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // first line is the key, the rest is the stored entry
    let (key, text) = s.split_once('\n').unwrap_or((s, ""));
    if let Some(payload) = decode_entry(text, key) {
        assert_eq!(decode_entry(&encode_entry(key, &payload), key).as_deref(), Some(payload.as_str()));
    }
});
