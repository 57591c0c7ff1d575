//! Coefficient tables `t_{i,j}` of two-dimensional recurrences
//! `p_{n,k} = Σ t_{i,j} p_{n−i,k−j}`.
//!
//! Gap and summand tables are built from a term list that mirrors the
//! recurrences as written, one [`RecurrenceTerm`] per summand, so that the
//! substitution rule for `C_μ*` and `C_σ*` can run over the same terms the
//! table was folded from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plrs::{bracketed_root, characteristic, Plrs};
use crate::zeckendorf::Statistic;

/// Largest gap size a table may be built for; the lag depth is `L + g`.
pub const GAP_CAP: usize = 16;

/// Largest `i₀` or `j₀` accepted by [`CoefficientTable::from_terms`].
pub const MAX_EXTENT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Summands,
    Gap(usize),
    Custom,
}

impl TableKind {
    pub fn statistic(self) -> Option<Statistic> {
        match self {
            TableKind::Summands => Some(Statistic::Summands),
            TableKind::Gap(g) => Some(Statistic::Gap(g)),
            TableKind::Custom => None,
        }
    }
}

impl From<Statistic> for TableKind {
    fn from(stat: Statistic) -> Self {
        match stat {
            Statistic::Summands => TableKind::Summands,
            Statistic::Gap(g) => TableKind::Gap(g),
        }
    }
}

/// One summand `coefficient · p_{n−lag, k−shift}` of a recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecurrenceTerm {
    pub coefficient: i64,
    pub lag: usize,
    pub shift: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    kind: TableKind,
    i0: usize,
    j0: usize,
    entries: BTreeMap<(usize, usize), i64>,
    terms: Vec<RecurrenceTerm>,
    n0: usize,
    k0: usize,
    d: Vec<u64>,
    c_star: Vec<u32>,
}

impl CoefficientTable {
    /// Folds `terms` into a table with lags `1..=i0` and shifts `0..=j0`.
    ///
    /// Fails on out-of-range lags or shifts, on an all-zero table, on a
    /// negative lag marginal `ĥ_i` and when a sum leaves the `i64` range.
    pub fn from_terms(kind: TableKind, i0: usize, j0: usize, terms: Vec<RecurrenceTerm>) -> Result<Self> {
        if i0 > MAX_EXTENT || j0 > MAX_EXTENT {
            return Err(Error::InvalidTable(format!("extent ({i0}, {j0}) exceeds {MAX_EXTENT}")));
        }
        let overflow = || Error::InvalidTable("coefficient sum overflows i64".into());
        let mut entries = BTreeMap::new();
        for term in &terms {
            if term.lag == 0 || term.lag > i0 || term.shift > j0 {
                return Err(Error::InvalidTable(format!(
                    "term at (i, j) = ({}, {}) lies outside lags 1..={i0} and shifts 0..={j0}",
                    term.lag, term.shift
                )));
            }
            let entry = entries.entry((term.lag, term.shift)).or_insert(0i64);
            *entry = entry.checked_add(term.coefficient).ok_or_else(overflow)?;
        }
        entries.retain(|_, t| *t != 0);
        if entries.is_empty() {
            return Err(Error::InvalidTable("all coefficients vanish".into()));
        }
        let mut hat = vec![0i64; i0];
        for (&(i, _), &t) in &entries {
            hat[i - 1] = hat[i - 1].checked_add(t).ok_or_else(overflow)?;
        }
        if let Some((i, value)) = hat.iter().enumerate().find(|(_, &h)| h < 0) {
            return Err(Error::InvalidTable(format!("ĥ_{} = {value} is negative", i + 1)));
        }
        Ok(Self { kind, i0, j0, entries, terms, n0: 1, k0: 0, d: Vec::new(), c_star: Vec::new() })
    }

    /// A table given directly as `(i, j, t_{i,j})` triples.
    pub fn custom(entries: &[(usize, usize, i64)]) -> Result<Self> {
        let i0 = entries.iter().map(|e| e.0).max().unwrap_or(0);
        let j0 = entries.iter().map(|e| e.1).max().unwrap_or(0);
        let terms = entries.iter().map(|&(lag, shift, coefficient)| RecurrenceTerm { coefficient, lag, shift }).collect();
        Self::from_terms(TableKind::Custom, i0.max(1), j0, terms)
    }

    /// `p_{n,k} = p_{n−1,k} + p_{n−1,k−1}`, whose rows are Pascal's triangle.
    pub fn binomial() -> Self {
        Self::custom(&[(1, 0, 1), (1, 1, 1)]).expect("valid table")
    }

    fn with_plrs_metadata(mut self, plrs: &Plrs, n0: usize, k0: usize) -> Self {
        self.n0 = n0;
        self.k0 = k0;
        self.d = plrs.prefix_sums();
        self.c_star = plrs.starred();
        self
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    /// Maximum lag `i₀`.
    pub fn i0(&self) -> usize {
        self.i0
    }

    /// Maximum shift `j₀`.
    pub fn j0(&self) -> usize {
        self.j0
    }

    /// First `n` from which the recurrence is seeded and asserted.
    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    /// Prefix sums `d_0..d_L` of the source recurrence (empty for custom tables).
    pub fn prefix_sums(&self) -> &[u64] {
        &self.d
    }

    pub fn c_star(&self) -> &[u32] {
        &self.c_star
    }

    /// Nonzero entries keyed by `(i, j)`.
    pub fn entries(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// The recurrence terms before folding.
    pub fn terms(&self) -> &[RecurrenceTerm] {
        &self.terms
    }

    /// Lag marginals `ĥ_1..ĥ_{i₀}` (index `i − 1`).
    pub fn hat_t(&self) -> Vec<i64> {
        let mut hat = vec![0; self.i0];
        for (&(i, _), &t) in &self.entries {
            hat[i - 1] += t;
        }
        hat
    }

    /// Marginals with trailing zeros dropped. `T(x)` is `x^{i₀−L'}` times the
    /// polynomial they define, so the two share every nonzero root.
    fn reduced_marginals(&self) -> Vec<f64> {
        let mut hat: Vec<f64> = self.hat_t().into_iter().map(|h| h as f64).collect();
        while hat.last() == Some(&0.0) {
            hat.pop();
        }
        hat
    }

    /// `x^{i₀} − Σ ĥ_i x^{i₀−i}`.
    pub fn characteristic(&self, x: f64) -> f64 {
        let hat: Vec<f64> = self.hat_t().into_iter().map(|h| h as f64).collect();
        characteristic(&hat, x)
    }

    /// `|T(λ)|` after removing the factor `x^{i₀−L'}` that only contributes
    /// roots at zero.
    pub fn reduced_residual(&self, lambda: f64) -> f64 {
        characteristic(&self.reduced_marginals(), lambda).abs()
    }

    /// The positive root of `T`.
    pub fn dominant_root(&self) -> Result<f64> {
        let hat = self.reduced_marginals();
        let sum: f64 = hat.iter().sum();
        bracketed_root(&hat, 0.0, 1.0 + sum)
    }
}

/// Recurrence for `p_{g,n,k}`, the number of `M ∈ [G_n, G_{n+1})` with
/// exactly `k` gaps of size `g`.
pub fn build_gap_table(plrs: &Plrs, g: usize) -> Result<CoefficientTable> {
    if !plrs.all_positive() {
        return Err(Error::NotAllPositive);
    }
    if g > GAP_CAP {
        return Err(Error::GapTooLarge { g, cap: GAP_CAP });
    }
    let l = plrs.order();
    let c = |i: usize| i64::from(plrs.coefficient(i));
    let c_star = plrs.starred();
    let d = plrs.prefix_sums();
    let mut terms = Vec::new();
    let mut push = |coefficient: i64, lag: usize, shift: usize| {
        if coefficient != 0 {
            terms.push(RecurrenceTerm { coefficient, lag, shift });
        }
    };
    // w · (p_{n−a, k−y1} − p_{n−a, k−y2} − p_{n−a−1, k−y1} + p_{n−a−1, k−y2})
    let difference = |push: &mut dyn FnMut(i64, usize, usize), w: i64, a: usize, y1: usize, y2: usize| {
        push(w, a, y1);
        push(-w, a, y2);
        push(-w, a + 1, y1);
        push(w, a + 1, y2);
    };

    let i0 = match g {
        0 => {
            for i in 1..=l {
                let base = (d[i - 1] as usize) - (i - 1);
                push(1, i, base);
                for j in 1..c(i) as usize {
                    push(1, i, base + j - 1);
                }
            }
            l
        }
        1 => {
            push(1, 1, 0);
            for i in 1..=l {
                push(c(i) - 1, i, i - 1);
            }
            for i in 2..=l {
                push(1, i, i - 2);
            }
            for i in 1..=l {
                difference(&mut push as &mut dyn FnMut(i64, usize, usize), c(i) - 1, i, i, i - 1);
            }
            l + 1
        }
        _ => {
            for i in 1..=l {
                push(c(i), i, 0);
            }
            for i in 1..=l {
                difference(&mut push as &mut dyn FnMut(i64, usize, usize), i64::from(c_star[i - 1]), i + g - 1, 1, 0);
            }
            l + g
        }
    };
    let j0 = d[l] as usize;
    let table = CoefficientTable::from_terms(TableKind::Gap(g), i0, j0, terms)?;
    let n0 = if g == 0 { l } else { l + g };
    Ok(table.with_plrs_metadata(plrs, n0, d[l] as usize))
}

/// Recurrence for the number of `M ∈ [G_n, G_{n+1})` with `k` summands:
/// `t_{i,j} = 1` for `d_{i−1} ≤ j ≤ d_i − 1`.
pub fn build_summand_table(plrs: &Plrs) -> CoefficientTable {
    let l = plrs.order();
    let d = plrs.prefix_sums();
    let terms = (1..=l)
        .flat_map(|i| (d[i - 1]..d[i]).map(move |j| RecurrenceTerm { coefficient: 1, lag: i, shift: j as usize }))
        .collect();
    let table = CoefficientTable::from_terms(TableKind::Summands, l, d[l] as usize - 1, terms).expect("summand table is valid");
    table.with_plrs_metadata(plrs, l, d[l] as usize)
}

/// The table counting `stat` for `plrs`.
pub fn build_table(plrs: &Plrs, stat: Statistic) -> Result<CoefficientTable> {
    match stat {
        Statistic::Summands => Ok(build_summand_table(plrs)),
        Statistic::Gap(g) => build_gap_table(plrs, g),
    }
}
