#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::format::RowRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(record) = RowRecord::from_json(text) else { return };
    let row = record.to_row().expect("from_json validated the entries");
    let again = RowRecord::new(&record.plrs, record.g, record.n, &row);
    assert_eq!(again.to_row().unwrap().dense(), row.dense());
    let json = serde_json::to_string(&again).unwrap();
    assert_eq!(RowRecord::from_json(&json).unwrap(), again);
});
