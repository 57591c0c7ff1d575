#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::format::parse_decimal;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(value) = parse_decimal(text) else { return };
    let digits = text.trim_start_matches('0');
    let expected = if digits.is_empty() { "0" } else { digits };
    assert_eq!(value.to_string(), expected);
});
