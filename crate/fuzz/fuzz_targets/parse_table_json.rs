#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::format::TableRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(record) = TableRecord::from_json(text) else { return };
    let Ok(table) = record.to_table() else { return };
    let again = TableRecord::from(&table).to_table().expect("exported tables rebuild");
    assert_eq!(again.entries(), table.entries());
    assert_eq!((again.i0(), again.j0()), (table.i0(), table.j0()));
    let _ = table.dominant_root();
});
