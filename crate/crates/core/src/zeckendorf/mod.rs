//! Legal decompositions and their gap statistics.
//!
//! A digit string `a_1..a_N` is legal when it reads as a sequence of blocks,
//! each block being a prefix `c_1, ..., c_{s-1}, a_s` with `a_s < c_s`,
//! optionally followed by zeros, possibly ending with the full word
//! `c_1..c_N` cut short. A small cursor tracks how much of the current block
//! has matched `c_1 c_2 ...` and hence the largest digit allowed next.

mod oracle;
mod partition;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::plrs::{Plrs, SequenceTable};

pub use oracle::{enumerate_interval, enumerate_range, GapSelection, IntervalCounts, DEFAULT_BUDGET};
pub use partition::{interval_partition, IntervalPartition, PartitionInterval};

/// The quantity a row counts: summands `k_Σ(M)` or gaps of one size `k_g(M)`.
///
/// Serializes as `"sigma"` or as the gap size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Summands,
    Gap(usize),
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Summands => f.write_str("sigma"),
            Statistic::Gap(g) => write!(f, "g={g}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StatisticRepr {
    Gap(usize),
    Named(String),
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Statistic::Summands => s.serialize_str("sigma"),
            Statistic::Gap(g) => s.serialize_u64(g as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match StatisticRepr::deserialize(d)? {
            StatisticRepr::Gap(g) => Ok(Statistic::Gap(g)),
            StatisticRepr::Named(name) if name == "sigma" => Ok(Statistic::Summands),
            StatisticRepr::Named(name) => {
                Err(serde::de::Error::custom(format!("expected a gap size or \"sigma\", got {name:?}")))
            }
        }
    }
}

/// Tracks the legality state while digits are read from the most
/// significant end.
#[derive(Debug, Clone)]
pub(crate) struct LegalityCursor<'a> {
    coeffs: &'a [u32],
    matched: usize,
}

impl<'a> LegalityCursor<'a> {
    pub(crate) fn new(coeffs: &'a [u32]) -> Self {
        Self { coeffs, matched: 0 }
    }

    /// Largest digit allowed at the next position.
    pub(crate) fn cap(&self) -> u32 {
        let c = self.coeffs[self.matched];
        if self.matched + 1 < self.coeffs.len() {
            c
        } else {
            c - 1
        }
    }

    pub(crate) fn advance(&mut self, digit: u32) {
        if digit == self.coeffs[self.matched] && self.matched + 1 < self.coeffs.len() {
            self.matched += 1;
        } else {
            self.matched = 0;
        }
    }
}

/// Digits `a_1..a_N` of `M = Σ a_i G_{N+1−i}`, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    digits: Vec<u32>,
}

impl Decomposition {
    /// Wraps a digit string after checking it is legal.
    pub fn from_digits(digits: Vec<u32>, plrs: &Plrs) -> Option<Self> {
        is_legal(&digits, plrs).then_some(Self { digits })
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Index `N` of the largest summand.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Indices `i_1 ≥ i_2 ≥ ... ≥ i_k`, each repeated per its digit.
    pub fn summand_indices(&self) -> Vec<usize> {
        let n = self.digits.len();
        self.digits.iter().enumerate().flat_map(|(t, &a)| std::iter::repeat(n - t).take(a as usize)).collect()
    }

    /// `k_Σ = Σ a_i`.
    pub fn total_summands(&self) -> u64 {
        self.digits.iter().map(|&a| u64::from(a)).sum()
    }

    /// `Σ a_i G_{N+1−i}`, extending `seq` as needed.
    pub fn reconstruct(&self, plrs: &Plrs, seq: &mut SequenceTable) -> BigUint {
        seq.extend(plrs, self.digits.len());
        reconstruct(&self.digits, seq)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `Σ a_i G_{N+1−i}` for a digit string of length at most `seq.len()`.
pub fn reconstruct(digits: &[u32], seq: &SequenceTable) -> BigUint {
    let n = digits.len();
    let mut total = BigUint::zero();
    for (t, &a) in digits.iter().enumerate() {
        if a != 0 {
            total += seq.term(n - t) * a;
        }
    }
    total
}

/// The unique legal decomposition of `m ≥ 1`, built greedily.
pub fn decompose(m: &BigUint, plrs: &Plrs) -> Result<Decomposition> {
    let mut seq = plrs.sequence(plrs.order());
    decompose_with(m, plrs, &mut seq)
}

/// [`decompose`] reusing (and extending) a sequence table.
pub fn decompose_with(m: &BigUint, plrs: &Plrs, seq: &mut SequenceTable) -> Result<Decomposition> {
    if m.is_zero() {
        return Err(Error::NonPositiveInteger);
    }
    seq.extend_past(plrs, m);
    let top = seq.top_index(m).expect("m ≥ 1 = G_1");
    let mut rest = m.clone();
    let mut cursor = LegalityCursor::new(plrs.coeffs());
    let mut digits = Vec::with_capacity(top);
    for index in (1..=top).rev() {
        let g = seq.term(index);
        let fits = (&rest / g).to_u32().unwrap_or(u32::MAX);
        let a = fits.min(cursor.cap());
        if a > 0 {
            rest -= g * a;
        }
        cursor.advance(a);
        digits.push(a);
    }
    debug_assert!(rest.is_zero());
    Ok(Decomposition { digits })
}

/// Greedy decomposition over `u64` terms, writing digits into `digits`.
///
/// `terms[t] = G_{t+1}` must extend past `m`. Returns the top index `N`.
pub(crate) fn decompose_u64(m: u64, coeffs: &[u32], terms: &[u64], digits: &mut Vec<u32>) -> usize {
    let top = terms.partition_point(|&g| g <= m);
    let mut rest = m;
    let mut cursor = LegalityCursor::new(coeffs);
    digits.clear();
    for t in (0..top).rev() {
        let g = terms[t];
        let a = (rest / g).min(u64::from(cursor.cap())) as u32;
        rest -= g * u64::from(a);
        cursor.advance(a);
        digits.push(a);
    }
    debug_assert_eq!(rest, 0);
    top
}

/// Whether `digits` is a legal digit string. The empty string is legal; a
/// leading zero is not.
pub fn is_legal(digits: &[u32], plrs: &Plrs) -> bool {
    if digits.first() == Some(&0) {
        return false;
    }
    let mut cursor = LegalityCursor::new(plrs.coeffs());
    for &a in digits {
        if a > cursor.cap() {
            return false;
        }
        cursor.advance(a);
    }
    true
}

/// Gap counts `k_g` and the summand count `k_Σ` of one decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GapProfile {
    pub gap_counts: BTreeMap<usize, u64>,
    pub total_summands: u64,
}

impl GapProfile {
    /// `k_g`, zero for gap sizes that do not occur.
    pub fn count(&self, g: usize) -> u64 {
        self.gap_counts.get(&g).copied().unwrap_or(0)
    }

    pub fn statistic(&self, stat: Statistic) -> u64 {
        match stat {
            Statistic::Summands => self.total_summands,
            Statistic::Gap(g) => self.count(g),
        }
    }
}

pub fn gap_profile(d: &Decomposition) -> GapProfile {
    let indices = d.summand_indices();
    let mut gap_counts = BTreeMap::new();
    for pair in indices.windows(2) {
        *gap_counts.entry(pair[0] - pair[1]).or_insert(0) += 1;
    }
    GapProfile { gap_counts, total_summands: indices.len() as u64 }
}
