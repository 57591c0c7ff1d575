//! Rounding exact integer ratios to `f64`.
//!
//! Row counts outgrow every fixed-width type long before the interesting
//! range of `n`, so each ratio is formed as a big-integer quotient carrying
//! [`QUOTIENT_BITS`] significant bits and only then rounded.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

/// Significant bits kept in the integer quotient (about 38 decimal digits).
pub const QUOTIENT_BITS: u64 = 128;

/// `num / den` rounded to the nearest representable `f64`.
///
/// # Panics
/// If `den` is zero.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let shift = QUOTIENT_BITS as i64 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    ldexp(quotient.to_f64().unwrap_or(f64::INFINITY), -shift)
}

/// Signed variant of [`ratio_to_f64`].
pub fn signed_ratio_to_f64(num: &BigInt, den: &BigUint) -> f64 {
    let magnitude = ratio_to_f64(num.magnitude(), den);
    if num.sign() == Sign::Minus {
        -magnitude
    } else {
        magnitude
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().map_or(f64::NEG_INFINITY, f64::ln);
    }
    let top = (x >> (bits - 64)).to_f64().unwrap_or(f64::NAN);
    top.ln() + (bits - 64) as f64 * std::f64::consts::LN_2
}

/// `x · 2^exp`, stepping through the exponent range so intermediate powers
/// of two never overflow.
pub fn ldexp(mut x: f64, mut exp: i64) -> f64 {
    const STEP: i64 = 1000;
    while exp > STEP {
        x *= 2f64.powi(STEP as i32);
        exp -= STEP;
    }
    while exp < -STEP {
        x *= 2f64.powi(-STEP as i32);
        exp += STEP;
    }
    x * 2f64.powi(exp as i32)
}
