//! Exact evolution of `p_{n,k} = Σ t_{i,j} p_{n−i,k−j}`.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::convergence::{ratio_convergence, ConvergenceReport};
use crate::error::{Error, Result};
use crate::ratio::ratio_to_f64;
use crate::table::CoefficientTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Oracle,
    Evolved,
}

/// One row `p_{n,·}`, stored densely over its support window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    offset: usize,
    values: Vec<BigUint>,
    omega: BigUint,
    provenance: Provenance,
}

impl Row {
    /// Builds a row from `p_{n,0}, p_{n,1}, ...`, trimming zeros at both ends.
    pub fn new(dense: Vec<BigUint>, provenance: Provenance) -> Self {
        Self::from_window(0, dense, provenance)
    }

    fn from_window(offset: usize, mut values: Vec<BigUint>, provenance: Provenance) -> Self {
        while values.last().is_some_and(Zero::is_zero) {
            values.pop();
        }
        let lead = values.iter().take_while(|v| v.is_zero()).count();
        values.drain(..lead);
        let offset = if values.is_empty() { 0 } else { offset + lead };
        let omega = values.iter().sum();
        Self { offset, values, omega, provenance }
    }

    /// `p_{n,k}`, zero outside the support.
    pub fn get(&self, k: usize) -> BigUint {
        k.checked_sub(self.offset).and_then(|t| self.values.get(t)).cloned().unwrap_or_default()
    }

    /// First `k` of the stored window.
    pub fn offset(&self) -> usize {
        self.offset
    }

    /// Stored entries, starting at `k = offset()`.
    pub fn window(&self) -> &[BigUint] {
        &self.values
    }

    /// One past the largest `k` with `p_{n,k} > 0` (zero for an empty row).
    pub fn end(&self) -> usize {
        self.offset + self.values.len()
    }

    /// `p_{n,0..end()}`.
    pub fn dense(&self) -> Vec<BigUint> {
        (0..self.end()).map(|k| self.get(k)).collect()
    }

    /// `(k, p_{n,k})` over the stored window.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> + '_ {
        self.values.iter().enumerate().map(move |(t, v)| (self.offset + t, v))
    }

    /// `Ω_n = Σ_k p_{n,k}`.
    pub fn omega(&self) -> &BigUint {
        &self.omega
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Consecutive rows `p_{first,·}, p_{first+1,·}, ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowTable {
    first: usize,
    rows: Vec<Row>,
}

impl RowTable {
    pub fn new(first: usize) -> Self {
        Self { first, rows: Vec::new() }
    }

    /// Appends the row for `n = last_n() + 1`.
    pub fn push(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn first_n(&self) -> usize {
        self.first
    }

    /// Index of the last stored row; `None` when empty.
    pub fn last_n(&self) -> Option<usize> {
        (!self.rows.is_empty()).then(|| self.first + self.rows.len() - 1)
    }

    /// Index the next pushed row will get.
    pub fn next_n(&self) -> usize {
        self.first + self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, n: usize) -> Option<&Row> {
        n.checked_sub(self.first).and_then(|t| self.rows.get(t))
    }

    pub fn require(&self, n: usize) -> Result<&Row> {
        self.row(n).ok_or(Error::MissingRow { n })
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Row)> + '_ {
        self.rows.iter().enumerate().map(move |(t, r)| (self.first + t, r))
    }

    /// `Ω_n`.
    pub fn omega(&self, n: usize) -> Result<&BigUint> {
        self.require(n).map(Row::omega)
    }

    /// The rows `first..=last` as a new table.
    pub fn slice(&self, first: usize, last: usize) -> Result<RowTable> {
        let mut out = RowTable::new(first);
        for n in first..=last {
            out.push(self.require(n)?.clone());
        }
        Ok(out)
    }

    /// `q_{n,k} = Σ_{first ≤ m < n} p_{m,k}`: the counts over
    /// `[G_first, G_n)` for gap and summand tables.
    pub fn cumulative(&self, n: usize) -> Result<Vec<BigUint>> {
        let mut q: Vec<BigUint> = Vec::new();
        for m in self.first..n {
            let row = self.require(m)?;
            if q.len() < row.end() {
                q.resize(row.end(), BigUint::zero());
            }
            for (k, v) in row.iter() {
                q[k] += v;
            }
        }
        Ok(q)
    }
}

/// Extends `seeds` through `n_target`. The last `i₀` stored rows must be
/// present; every evolved entry must be non-negative.
pub fn evolve(table: &CoefficientTable, seeds: RowTable, n_target: usize) -> Result<RowTable> {
    let mut rows = seeds;
    let needed = table.i0();
    if rows.len() < needed {
        return Err(Error::InsufficientSeeds { needed, got: rows.len(), next: rows.next_n() });
    }
    while rows.next_n() <= n_target {
        let row = next_row(table, &rows)?;
        rows.push(row);
    }
    Ok(rows)
}

fn next_row(table: &CoefficientTable, rows: &RowTable) -> Result<Row> {
    let n = rows.next_n();
    let source = |i: usize| n.checked_sub(i).and_then(|m| rows.row(m)).filter(|r| !r.is_empty());

    let mut lo = usize::MAX;
    let mut hi = 0;
    for &(i, j) in table.entries().keys() {
        if let Some(r) = source(i) {
            lo = lo.min(r.offset() + j);
            hi = hi.max(r.end() + j);
        }
    }
    if lo >= hi {
        return Ok(Row::new(Vec::new(), Provenance::Evolved));
    }

    let mut positive = vec![BigUint::zero(); hi - lo];
    let mut negative = vec![BigUint::zero(); hi - lo];
    for (&(i, j), &t) in table.entries() {
        let Some(r) = source(i) else { continue };
        let acc = if t > 0 { &mut positive } else { &mut negative };
        let weight = t.unsigned_abs();
        let base = r.offset() + j - lo;
        for (t, v) in r.window().iter().enumerate() {
            if weight == 1 {
                acc[base + t] += v;
            } else {
                acc[base + t] += v * weight;
            }
        }
    }
    let mut values = Vec::with_capacity(hi - lo);
    for (k, (p, m)) in positive.into_iter().zip(negative).enumerate() {
        if p < m {
            return Err(Error::NegativeEntry { n, k: lo + k });
        }
        values.push(p - m);
    }
    Ok(Row::from_window(lo, values, Provenance::Evolved))
}

/// `Pr[X_n = k] = p_{n,k} / Ω_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub n: usize,
    pub probs: Vec<f64>,
}

impl Distribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

pub fn distribution(rows: &RowTable, n: usize) -> Result<Distribution> {
    let row = rows.require(n)?;
    if row.omega().is_zero() {
        return Err(Error::DegenerateRow { n });
    }
    let probs = (0..row.end()).map(|k| ratio_to_f64(&row.get(k), row.omega())).collect();
    Ok(Distribution { n, probs })
}

/// Convergence of `Ω_{n−1}/Ω_n` to `1/λ₁`.
pub fn omega_ratio_series(rows: &RowTable, lambda1: f64) -> Result<ConvergenceReport> {
    const NEEDED: usize = 20;
    if rows.len() < NEEDED {
        return Err(Error::TooFewTerms { needed: NEEDED, got: rows.len() });
    }
    let omegas: Vec<&BigUint> = rows.rows.iter().map(Row::omega).collect();
    Ok(ratio_convergence(rows.first, &omegas, lambda1))
}
