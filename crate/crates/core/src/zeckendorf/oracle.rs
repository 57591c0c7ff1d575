//! Brute-force tallies of `k_Σ(M)` and `k_g(M)` over integer ranges.

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{decompose_u64, Statistic};
use crate::error::{Error, Result};
use crate::plrs::Plrs;

/// Default cap on the number of integers a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const CHUNK: u64 = 1 << 14;

/// Which gap sizes to tally. Summand counts are always tallied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapSelection {
    All,
    Gap(usize),
}

impl GapSelection {
    pub fn for_statistic(stat: Statistic) -> Self {
        match stat {
            Statistic::Summands => GapSelection::Gap(0),
            Statistic::Gap(g) => GapSelection::Gap(g),
        }
    }
}

/// Exact histograms over `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalCounts {
    pub start: u64,
    pub end: u64,
    selection: GapSelection,
    summands: Vec<u64>,
    /// `gaps[g][k]` for `k ≥ 1`; the `k = 0` slot is filled in at the end.
    gaps: Vec<Vec<u64>>,
}

impl IntervalCounts {
    pub fn total(&self) -> u64 {
        self.end - self.start
    }

    /// `summand_row()[k]` integers have `k` summands.
    pub fn summand_row(&self) -> &[u64] {
        &self.summands
    }

    /// `gap_row(g)[k]` integers have exactly `k` gaps of size `g`; `None`
    /// if `g` was not tallied.
    pub fn gap_row(&self, g: usize) -> Option<Vec<u64>> {
        match self.selection {
            GapSelection::Gap(h) if h != g => return None,
            _ => {}
        }
        Some(match self.gaps.get(g) {
            Some(row) if row.len() > 1 => row.clone(),
            _ => vec![self.total()],
        })
    }

    pub fn row(&self, stat: Statistic) -> Option<Vec<u64>> {
        match stat {
            Statistic::Summands => Some(self.summands.clone()),
            Statistic::Gap(g) => self.gap_row(g),
        }
    }

    pub fn row_big(&self, stat: Statistic) -> Option<Vec<BigUint>> {
        self.row(stat).map(|r| r.into_iter().map(BigUint::from).collect())
    }

    /// Largest gap size observed (only meaningful for [`GapSelection::All`]).
    pub fn max_gap(&self) -> Option<usize> {
        self.gaps.iter().rposition(|row| row.iter().skip(1).any(|&c| c > 0))
    }
}

#[derive(Default)]
struct Tally {
    summands: Vec<u64>,
    gaps: Vec<Vec<u64>>,
}

impl Tally {
    fn bump(row: &mut Vec<u64>, k: usize) {
        if row.len() <= k {
            row.resize(k + 1, 0);
        }
        row[k] += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        merge_rows(&mut self.summands, &other.summands);
        if self.gaps.len() < other.gaps.len() {
            self.gaps.resize(other.gaps.len(), Vec::new());
        }
        for (mine, theirs) in self.gaps.iter_mut().zip(&other.gaps) {
            merge_rows(mine, theirs);
        }
        self
    }
}

fn merge_rows(into: &mut Vec<u64>, from: &[u64]) {
    if into.len() < from.len() {
        into.resize(from.len(), 0);
    }
    for (a, b) in into.iter_mut().zip(from) {
        *a += b;
    }
}

fn tally_chunk(lo: u64, hi: u64, coeffs: &[u32], terms: &[u64], selection: GapSelection) -> Tally {
    let mut tally = Tally::default();
    let mut digits = Vec::new();
    let mut per_gap: Vec<usize> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    for m in lo..hi {
        let top = decompose_u64(m, coeffs, terms, &mut digits);
        if per_gap.len() <= top {
            per_gap.resize(top + 1, 0);
        }
        let mut summands = 0usize;
        let mut previous: Option<usize> = None;
        for (t, &a) in digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let index = top - t;
            summands += a as usize;
            let mut record = |gap: usize, times: usize| {
                if times == 0 {
                    return;
                }
                if let GapSelection::Gap(g) = selection {
                    if g != gap {
                        return;
                    }
                }
                if per_gap[gap] == 0 {
                    touched.push(gap);
                }
                per_gap[gap] += times;
            };
            if let Some(p) = previous {
                record(p - index, 1);
            }
            record(0, a as usize - 1);
            previous = Some(index);
        }
        Tally::bump(&mut tally.summands, summands);
        for gap in touched.drain(..) {
            if tally.gaps.len() <= gap {
                tally.gaps.resize(gap + 1, Vec::new());
            }
            Tally::bump(&mut tally.gaps[gap], per_gap[gap]);
            per_gap[gap] = 0;
        }
    }
    tally
}

/// Tallies every `M` in `[start, end)`, `start ≥ 1`.
pub fn enumerate_range(plrs: &Plrs, start: u64, end: u64, selection: GapSelection) -> Result<IntervalCounts> {
    if start == 0 {
        return Err(Error::NonPositiveInteger);
    }
    let end = end.max(start);
    let mut seq = plrs.sequence(plrs.order());
    seq.extend_past(plrs, &BigUint::from(end));
    let terms = seq.to_u64_prefix();

    let chunks: Vec<(u64, u64)> = (start..end).step_by(CHUNK as usize).map(|lo| (lo, (lo + CHUNK).min(end))).collect();
    let mut tally = chunks
        .into_par_iter()
        .map(|(lo, hi)| tally_chunk(lo, hi, plrs.coeffs(), &terms, selection))
        .reduce(Tally::default, Tally::merge);

    let total = end - start;
    if tally.summands.is_empty() {
        tally.summands.push(0);
    }
    if let GapSelection::Gap(g) = selection {
        if tally.gaps.len() <= g {
            tally.gaps.resize(g + 1, Vec::new());
        }
    }
    for row in &mut tally.gaps {
        if row.is_empty() {
            row.push(0);
        }
        row[0] = total - row[1..].iter().sum::<u64>();
    }
    Ok(IntervalCounts { start, end, selection, summands: tally.summands, gaps: tally.gaps })
}

/// Tallies every `M` in `[G_n, G_{n+1})`, refusing intervals larger than
/// `budget`.
pub fn enumerate_interval(plrs: &Plrs, n: usize, selection: GapSelection, budget: u64) -> Result<IntervalCounts> {
    if n == 0 {
        return Err(Error::IndexOutOfRange { n, reason: "sequence indices start at 1" });
    }
    let seq = plrs.sequence(n + 1);
    let size = seq.interval_size(n);
    let over = || Error::BudgetExceeded { n, size: size.to_string(), budget };
    let small = u64::try_from(&size).ok().filter(|&s| s <= budget).ok_or_else(over)?;
    let start = u64::try_from(seq.term(n)).map_err(|_| over())?;
    let end = start.checked_add(small).ok_or_else(over)?;
    enumerate_range(plrs, start, end, selection)
}
