#![no_main]

use libfuzzer_sys::fuzz_target;
use plrs_gaps::{decompose, is_legal, Decomposition, Plrs};

// Input: up to four coefficient bytes, then digit bytes.
fuzz_target!(|data: &[u8]| {
    let Some((&order, rest)) = data.split_first() else { return };
    let order = usize::from(order % 4) + 1;
    if rest.len() < order {
        return;
    }
    let (coeffs, digits) = rest.split_at(order);
    let coeffs: Vec<u32> = coeffs.iter().map(|&c| u32::from(c % 5)).collect();
    let Ok(plrs) = Plrs::new(&coeffs) else { return };
    let mut digits: Vec<u32> = digits.iter().take(40).map(|&d| u32::from(d % 6)).collect();
    while digits.first() == Some(&0) {
        digits.remove(0);
    }
    if digits.is_empty() {
        return;
    }
    let legal = is_legal(&digits, &plrs);
    let Some(d) = Decomposition::from_digits(digits.clone(), &plrs) else {
        assert!(!legal);
        return;
    };
    assert!(legal);
    let mut seq = plrs.sequence(digits.len() + 1);
    let value = d.reconstruct(&plrs, &mut seq);
    assert_eq!(decompose(&value, &plrs).unwrap(), d);
});
