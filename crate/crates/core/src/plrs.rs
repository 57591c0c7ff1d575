//! Positive linear recurrence sequences and their spectral data.
//!
//! A PLRS with coefficients `c_1..c_L` starts at `G_1 = 1`, fills the first
//! `L` terms with `G_n = c_1 G_{n-1} + ... + c_{n-1} G_1 + 1` and continues
//! with `G_n = Σ c_i G_{n-i}`. Terms are 1-indexed throughout the crate.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::convergence::{ratio_convergence, ConvergenceReport};
use crate::error::{Error, Result};
use crate::ratio::ln_biguint;

/// Bisection stops once the bracket is this narrow.
pub const ROOT_BRACKET_WIDTH: f64 = 1e-13;
/// Newton steps applied after bisection.
pub const NEWTON_STEPS: usize = 3;
/// Required `|T(λ₁)|`, scaled by `max(1, λ₁^L)` so that recurrences with very
/// large coefficients are not held to a residual below their rounding error.
pub const ROOT_RESIDUAL: f64 = 1e-12;
/// Index at which `G_n / λ₁ⁿ` is sampled for the Binet coefficient.
pub const BINET_INDEX: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Plrs {
    coeffs: Vec<u32>,
}

impl Plrs {
    pub fn new(coeffs: &[u32]) -> Result<Self> {
        match coeffs {
            [] => Err(Error::EmptyCoefficients),
            [0, ..] => Err(Error::LeadingCoefficientZero),
            [.., 0] => Err(Error::TrailingCoefficientZero),
            [1] => Err(Error::ConstantSequence),
            _ => Ok(Self { coeffs: coeffs.to_vec() }),
        }
    }

    pub fn fibonacci() -> Self {
        Self { coeffs: vec![1, 1] }
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// The order `L`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `c_i` for `1 ≤ i ≤ L`, zero outside that range.
    pub fn coefficient(&self, i: usize) -> u32 {
        if i == 0 {
            0
        } else {
            self.coeffs.get(i - 1).copied().unwrap_or(0)
        }
    }

    pub fn all_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c > 0)
    }

    pub fn coefficient_sum(&self) -> u64 {
        self.coeffs.iter().map(|&c| u64::from(c)).sum()
    }

    /// Prefix sums `d_0 = 0, d_i = c_1 + ... + c_i` for `0 ≤ i ≤ L`.
    pub fn prefix_sums(&self) -> Vec<u64> {
        let mut d = Vec::with_capacity(self.order() + 1);
        d.push(0);
        for &c in &self.coeffs {
            d.push(d.last().unwrap() + u64::from(c));
        }
        d
    }

    /// `c*_i`: the coefficients with the last one lowered by one.
    pub fn starred(&self) -> Vec<u32> {
        let mut c = self.coeffs.clone();
        *c.last_mut().unwrap() -= 1;
        c
    }

    pub fn sequence(&self, n_max: usize) -> SequenceTable {
        let mut table = SequenceTable { terms: Vec::new() };
        table.extend(self, n_max);
        table
    }

    /// `T(x) = x^L − c_1 x^{L−1} − ... − c_L`.
    pub fn characteristic(&self, x: f64) -> f64 {
        let marginals: Vec<f64> = self.coeffs.iter().map(|&c| f64::from(c)).collect();
        characteristic(&marginals, x)
    }

    pub fn characteristic_derivative(&self, x: f64) -> f64 {
        let marginals: Vec<f64> = self.coeffs.iter().map(|&c| f64::from(c)).collect();
        characteristic_derivative(&marginals, x)
    }

    pub fn dominant_root(&self) -> Result<SpectralData> {
        let marginals: Vec<f64> = self.coeffs.iter().map(|&c| f64::from(c)).collect();
        let hi = 1.0 + self.coefficient_sum() as f64;
        let lambda1 = bracketed_root(&marginals, 1.0, hi)?;
        let residual = characteristic(&marginals, lambda1).abs();
        let seq = self.sequence(BINET_INDEX);
        let ln_a1 = ln_biguint(seq.term(BINET_INDEX)) - BINET_INDEX as f64 * lambda1.ln();
        Ok(SpectralData { lambda1, binet_a1: ln_a1.exp(), residual, derivative: characteristic_derivative(&marginals, lambda1) })
    }
}

impl fmt::Display for Plrs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Plrs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_error = |reason: String| Error::ParseCoefficients { input: s.to_owned(), reason };
        if s.trim().is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        let mut values = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let value: i64 = part.parse().map_err(|e| parse_error(format!("{part:?} is not an integer ({e})")))?;
            values.push(value);
        }
        Self::try_from(values)
    }
}

impl TryFrom<Vec<i64>> for Plrs {
    type Error = Error;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(values.len());
        for (t, &value) in values.iter().enumerate() {
            let index = t + 1;
            if value < 0 {
                return Err(Error::NegativeCoefficient { index, value });
            }
            let c = u32::try_from(value).map_err(|_| Error::CoefficientTooLarge { index, value })?;
            coeffs.push(c);
        }
        Self::new(&coeffs)
    }
}

impl From<Plrs> for Vec<u32> {
    fn from(p: Plrs) -> Self {
        p.coeffs
    }
}

/// Exact terms `G_1..G_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    terms: Vec<BigUint>,
}

impl SequenceTable {
    /// Appends terms until `G_{n_max}` is present.
    pub fn extend(&mut self, plrs: &Plrs, n_max: usize) {
        let l = plrs.order();
        while self.terms.len() < n_max {
            let n = self.terms.len() + 1;
            let mut next = if n <= l { BigUint::one() } else { BigUint::zero() };
            for (i, &c) in plrs.coeffs.iter().enumerate().take(n - 1) {
                if c != 0 {
                    next += &self.terms[n - 2 - i] * c;
                }
            }
            self.terms.push(next);
        }
    }

    /// Appends terms until the last one exceeds `m`.
    pub fn extend_past(&mut self, plrs: &Plrs, m: &BigUint) {
        while self.terms.last().map_or(true, |g| g <= m) {
            let len = self.terms.len();
            self.extend(plrs, len + 1);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `G_n`, 1-indexed.
    ///
    /// # Panics
    /// If `n` is zero or beyond the generated range.
    pub fn term(&self, n: usize) -> &BigUint {
        &self.terms[n - 1]
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|t| self.terms.get(t))
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    /// `G_{n+1} − G_n`, the number of integers in `[G_n, G_{n+1})`.
    pub fn interval_size(&self, n: usize) -> BigUint {
        self.term(n + 1) - self.term(n)
    }

    /// The largest `N` with `G_N ≤ m`, or `None` when `m < 1`.
    pub fn top_index(&self, m: &BigUint) -> Option<usize> {
        let count = self.terms.partition_point(|g| g <= m);
        (count > 0).then_some(count)
    }

    /// Terms that fit in a `u64`, in order.
    pub fn to_u64_prefix(&self) -> Vec<u64> {
        self.terms.iter().map_while(|g| u64::try_from(g).ok()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    pub lambda1: f64,
    /// Estimated leading coefficient of the Binet expansion, `G_n / λ₁ⁿ`.
    pub binet_a1: f64,
    /// `|T(λ₁)|`.
    pub residual: f64,
    /// `T'(λ₁)`; nonzero because the root is simple.
    pub derivative: f64,
}

/// Ratio-error report for `G_{n-1}/G_n → 1/λ₁`.
pub fn growth_ratio_check(seq: &SequenceTable, lambda1: f64) -> Result<ConvergenceReport> {
    const NEEDED: usize = 20;
    if seq.len() < NEEDED {
        return Err(Error::TooFewTerms { needed: NEEDED, got: seq.len() });
    }
    let terms: Vec<&BigUint> = seq.terms.iter().collect();
    Ok(ratio_convergence(1, &terms, lambda1))
}

/// `x^L − Σ a_i x^{L−i}` by Horner's rule.
pub(crate) fn characteristic(marginals: &[f64], x: f64) -> f64 {
    marginals.iter().fold(1.0, |acc, &a| acc * x - a)
}

pub(crate) fn characteristic_derivative(marginals: &[f64], x: f64) -> f64 {
    let l = marginals.len();
    let mut value = l as f64 * x.powi(l as i32 - 1);
    for (t, &a) in marginals.iter().enumerate().take(l.saturating_sub(1)) {
        let power = l - t - 2;
        value -= a * (power + 1) as f64 * x.powi(power as i32);
    }
    value
}

/// The unique positive root of `x^L − Σ a_i x^{L−i}` inside `(lo, hi]`,
/// given non-negative `a_i` with `T(lo) < 0 < T(hi)`.
pub(crate) fn bracketed_root(marginals: &[f64], mut lo: f64, mut hi: f64) -> Result<f64> {
    let t = |x: f64| characteristic(marginals, x);
    if t(hi) == 0.0 {
        return Ok(hi);
    }
    for _ in 0..400 {
        if hi - lo <= ROOT_BRACKET_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_STEPS {
        let slope = characteristic_derivative(marginals, x);
        if slope == 0.0 {
            break;
        }
        let next = x - t(x) / slope;
        if next.is_finite() && (lo..=hi).contains(&next) && t(next).abs() <= t(x).abs() {
            x = next;
        }
    }
    let residual = t(x).abs();
    let scale = x.powi(marginals.len() as i32).max(1.0);
    if residual > ROOT_RESIDUAL * scale {
        return Err(Error::RootNotConverged { residual });
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plrs(c: &[u32]) -> Plrs {
        Plrs::new(c).unwrap()
    }

    fn terms(p: &Plrs, n: usize) -> Vec<u64> {
        p.sequence(n).to_u64_prefix()
    }

    #[test]
    fn fibonacci_terms() {
        assert_eq!(terms(&Plrs::fibonacci(), 6), [1, 2, 3, 5, 8, 13]);
    }

    #[test]
    fn tribonacci_and_two_one_terms() {
        assert_eq!(terms(&plrs(&[1, 1, 1]), 6), [1, 2, 4, 7, 13, 24]);
        assert_eq!(terms(&plrs(&[2, 1]), 4), [1, 3, 7, 17]);
    }

    #[test]
    fn base_ten_is_powers_of_ten() {
        let seq = plrs(&[10]).sequence(25);
        for n in 1..=25 {
            assert_eq!(*seq.term(n), BigUint::from(10u32).pow(n as u32 - 1));
        }
    }

    #[test]
    fn zero_coefficients_in_the_middle_are_allowed() {
        let p = plrs(&[1, 0, 1]);
        assert!(!p.all_positive());
        assert_eq!(terms(&p, 7), [1, 2, 3, 4, 6, 9, 13]);
    }

    #[test]
    fn rejects_malformed_coefficients() {
        assert!(matches!(Plrs::new(&[0, 1]), Err(Error::LeadingCoefficientZero)));
        assert!(matches!(Plrs::new(&[1, 0]), Err(Error::TrailingCoefficientZero)));
        assert!(matches!(Plrs::new(&[]), Err(Error::EmptyCoefficients)));
        assert!(matches!(Plrs::new(&[1]), Err(Error::ConstantSequence)));
        assert!(matches!("1,-1".parse::<Plrs>(), Err(Error::NegativeCoefficient { index: 2, value: -1 })));
        assert!(matches!("1,x".parse::<Plrs>(), Err(Error::ParseCoefficients { .. })));
        assert!(matches!("".parse::<Plrs>(), Err(Error::EmptyCoefficients)));
        assert!(matches!("1,,1".parse::<Plrs>(), Err(Error::ParseCoefficients { .. })));
        assert!(matches!("5000000000".parse::<Plrs>(), Err(Error::CoefficientTooLarge { .. })));
        assert_eq!(Error::LeadingCoefficientZero.to_string(), "c_1 must be ≥ 1");
    }

    #[test]
    fn text_and_json_forms_round_trip() {
        let p: Plrs = " 2, 1 ,1".parse().unwrap();
        assert_eq!(p.coeffs(), [2, 1, 1]);
        assert_eq!(p.to_string(), "2,1,1");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "[2,1,1]");
        assert_eq!(serde_json::from_str::<Plrs>(&json).unwrap(), p);
        assert!(serde_json::from_str::<Plrs>("[0,1]").is_err());
        assert!(serde_json::from_str::<Plrs>("[1,-2]").is_err());
    }

    #[test]
    fn prefix_sums_and_starred() {
        let p = plrs(&[2, 1, 3]);
        assert_eq!(p.prefix_sums(), [0, 2, 3, 6]);
        assert_eq!(p.starred(), [2, 1, 2]);
        assert_eq!(p.coefficient(0), 0);
        assert_eq!(p.coefficient(3), 3);
        assert_eq!(p.coefficient(4), 0);
    }

    #[test]
    fn dominant_roots() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let fib = Plrs::fibonacci().dominant_root().unwrap();
        assert!((fib.lambda1 - phi).abs() < 1e-14);
        assert!(fib.residual <= 1e-12);
        // G_n = φ^{n+1}/√5 + ..., so a_1 = φ/√5.
        assert!((fib.binet_a1 - phi / 5f64.sqrt()).abs() < 1e-10);

        let ten = plrs(&[10]).dominant_root().unwrap();
        assert_eq!(ten.lambda1, 10.0);
        assert!((ten.binet_a1 - 0.1).abs() < 1e-12);

        let trib = plrs(&[1, 1, 1]).dominant_root().unwrap();
        assert!((trib.lambda1 - 1.839_286_755_2).abs() < 1e-10);
        assert!(trib.derivative.abs() > 1e-9);
    }

    #[test]
    fn large_coefficients_still_converge() {
        let p = plrs(&[1_000_000, 7, 1_000_000]);
        let s = p.dominant_root().unwrap();
        assert!(s.lambda1 > 1e6);
        assert!(s.binet_a1 > 0.0);
    }

    #[test]
    fn growth_ratio_errors() {
        let fib = Plrs::fibonacci();
        let lambda = fib.dominant_root().unwrap().lambda1;
        let report = growth_ratio_check(&fib.sequence(60), lambda).unwrap();
        assert!(report.error_at(40).unwrap() < 1e-15);
        assert!(report.passed());

        let ten = plrs(&[10]);
        let report = growth_ratio_check(&ten.sequence(30), 10.0).unwrap();
        assert!(report.errors.iter().all(|(_, e)| *e <= 1e-15));

        let trib = plrs(&[1, 1, 1]);
        let lambda = trib.dominant_root().unwrap().lambda1;
        let report = growth_ratio_check(&trib.sequence(60), lambda).unwrap();
        assert!(report.error_at(40).unwrap() <= 1e-9);
        assert!(report.passed());

        assert!(matches!(growth_ratio_check(&fib.sequence(10), lambda), Err(Error::TooFewTerms { needed: 20, got: 10 })));
    }

    #[test]
    fn top_index_lookup() {
        let seq = Plrs::fibonacci().sequence(10);
        assert_eq!(seq.top_index(&BigUint::from(0u32)), None);
        assert_eq!(seq.top_index(&BigUint::from(1u32)), Some(1));
        assert_eq!(seq.top_index(&BigUint::from(12u32)), Some(5));
        assert_eq!(seq.top_index(&BigUint::from(13u32)), Some(6));
    }
}
