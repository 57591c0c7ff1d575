#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::format::{read_jsonl, write_jsonl};

fuzz_target!(|data: &[u8]| {
    let Ok(file) = read_jsonl(data) else { return };
    let mut out = Vec::new();
    write_jsonl(&mut out, &file.plrs, file.statistic, &file.rows).unwrap();
    let again = read_jsonl(out.as_slice()).expect("written rows read back");
    assert_eq!(again.plrs, file.plrs);
    assert_eq!(again.statistic, file.statistic);
    assert_eq!(again.rows.len(), file.rows.len());
    for ((n, a), (m, b)) in again.rows.iter().zip(file.rows.iter()) {
        assert_eq!(n, m);
        assert_eq!(a.dense(), b.dense());
    }
});
