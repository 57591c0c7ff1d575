#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::Plrs;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(plrs) = text.parse::<Plrs>() else { return };
    assert!(plrs.coefficient(1) >= 1);
    assert!(plrs.coefficient(plrs.order()) >= 1);
    let again: Plrs = plrs.to_string().parse().expect("display output parses");
    assert_eq!(again, plrs);
});
