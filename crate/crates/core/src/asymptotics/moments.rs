//! Central moments `μ̃_n(m) = E[(X_n − μ_n)^m]`, computed directly from a
//! row or by the recursion over lags.

use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use super::clt::ks_distance;
use crate::engine::{Distribution, Row, RowTable};
use crate::error::{Error, Result};
use crate::ratio::{ratio_to_f64, signed_ratio_to_f64};
use crate::table::CoefficientTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentMode {
    Direct,
    Recursive,
}

/// Mean and central moments `μ̃(0..=m_max)` of one row distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub mean: f64,
    pub central: Vec<f64>,
    /// Kolmogorov distance to the matching normal, when computed.
    pub ks: Option<f64>,
}

impl MomentRow {
    pub fn variance(&self) -> f64 {
        self.central.get(2).copied().unwrap_or(0.0)
    }

    /// `μ̃(m) / σ^m`; `None` when the variance vanishes or `m` is out of range.
    pub fn standardized(&self, m: usize) -> Option<f64> {
        let var = self.variance();
        (var > 0.0).then(|| self.central.get(m).map(|c| c / var.powf(m as f64 / 2.0))).flatten()
    }

    fn degenerate(n: usize, m_max: usize) -> Self {
        let mut central = vec![0.0; m_max + 1];
        central[0] = 1.0;
        Self { n, mean: 0.0, central, ks: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub mode: MomentMode,
    pub rows: Vec<MomentRow>,
}

impl MomentReport {
    pub fn get(&self, n: usize) -> Option<&MomentRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// `(n, μ_n)` pairs.
    pub fn means(&self) -> Vec<(usize, f64)> {
        self.rows.iter().map(|r| (r.n, r.mean)).collect()
    }

    /// `(n, μ̃_n(m))` pairs.
    pub fn central_series(&self, m: usize) -> Vec<(usize, f64)> {
        self.rows.iter().filter_map(|r| r.central.get(m).map(|&c| (r.n, c))).collect()
    }
}

/// Moments by summation over a floating-point distribution.
pub fn moments_direct(dist: &Distribution, m_max: usize) -> MomentRow {
    let mean: f64 = dist.probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    let central =
        (0..=m_max).map(|m| dist.probs.iter().enumerate().map(|(k, p)| p * (k as f64 - mean).powi(m as i32)).sum()).collect();
    MomentRow { n: dist.n, mean, central, ks: None }
}

/// Moments of an exact row, rounded once at the end:
/// `μ̃(m) = Σ_k p_k (kΩ − S₁)^m / Ω^{m+1}` with `S₁ = Σ_k k p_k`.
pub fn exact_moments(row: &Row, n: usize, m_max: usize) -> Result<MomentRow> {
    let omega = row.omega();
    if omega.is_zero() {
        return Err(Error::DegenerateRow { n });
    }
    let s1: BigUint = row.iter().map(|(k, p)| p * BigUint::from(k)).sum();
    let omega_int = BigInt::from(omega.clone());
    let s1_int = BigInt::from(s1.clone());
    let mut sums = vec![BigInt::zero(); m_max + 1];
    for (k, p) in row.iter() {
        let d = BigInt::from(k) * &omega_int - &s1_int;
        let mut term = BigInt::from(p.clone());
        sums[0] += &term;
        for sum in sums.iter_mut().skip(1) {
            term *= &d;
            *sum += &term;
        }
    }
    let mut scale = omega.clone();
    let mut central = Vec::with_capacity(m_max + 1);
    for sum in &sums {
        central.push(signed_ratio_to_f64(sum, &scale));
        scale *= omega;
    }
    Ok(MomentRow { n, mean: ratio_to_f64(&s1, omega), central, ks: None })
}

/// [`exact_moments`] with the KS distance for every stored row in
/// `first..=last`.
pub fn moments_exact_series(rows: &RowTable, first: usize, last: usize, m_max: usize) -> Result<MomentReport> {
    let mut out = Vec::with_capacity(last.saturating_sub(first) + 1);
    for n in first..=last {
        let row = rows.require(n)?;
        let mut moments = exact_moments(row, n, m_max.max(2))?;
        let sd = moments.variance().sqrt();
        if sd > 0.0 {
            let dist = crate::engine::distribution(rows, n)?;
            moments.ks = Some(ks_distance(&dist, moments.mean, sd));
        }
        moments.central.truncate(m_max + 1);
        out.push(moments);
    }
    Ok(MomentReport { mode: MomentMode::Direct, rows: out })
}

fn binomials(m_max: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for m in 1..=m_max {
        let prev = &rows[m - 1];
        let mut row = vec![1.0; m + 1];
        for l in 1..m {
            row[l] = prev[l - 1] + prev[l];
        }
        rows.push(row);
    }
    rows
}

/// Moments for every row from the table's seeds through `n_target`.
///
/// The first `i₀` rows of `rows` are treated as seeds and measured directly;
/// each later row combines its lagged predecessors through
/// `μ_n = Σ t_{i,j} (Ω_{n−i}/Ω_n)(μ_{n−i} + j)` and
/// `μ̃_n(m) = Σ_ℓ C(m,ℓ) Σ t_{i,j} (Ω_{n−i}/Ω_n)(j + μ_{n−i} − μ_n)^ℓ μ̃_{n−i}(m−ℓ)`.
/// Only `Ω_n` is read from the later rows.
pub fn moments_recursive(table: &CoefficientTable, rows: &RowTable, m_max: usize, n_target: usize) -> Result<MomentReport> {
    let first = rows.first_n();
    let seed_end = first + table.i0();
    let choose = binomials(m_max);
    let mut out: Vec<MomentRow> = Vec::new();
    for n in first..=n_target {
        let row = rows.require(n)?;
        if n < seed_end {
            out.push(if row.omega().is_zero() { MomentRow::degenerate(n, m_max) } else { exact_moments(row, n, m_max)? });
            continue;
        }
        let omega = row.omega();
        if omega.is_zero() {
            return Err(Error::DegenerateRow { n });
        }
        let mut weights = vec![0.0; table.i0() + 1];
        for (i, w) in weights.iter_mut().enumerate().skip(1) {
            *w = ratio_to_f64(rows.omega(n - i)?, omega);
        }
        let past = |i: usize| &out[n - i - first];
        let mean: f64 = table.entries().iter().map(|(&(i, j), &t)| t as f64 * weights[i] * (past(i).mean + j as f64)).sum();
        let mut central = vec![0.0; m_max + 1];
        for (m, slot) in central.iter_mut().enumerate() {
            let mut total = 0.0;
            for (&(i, j), &t) in table.entries() {
                let prev = past(i);
                let shift = j as f64 + prev.mean - mean;
                let mut power = 1.0;
                let mut inner = 0.0;
                for (l, binom) in choose[m][..=m].iter().enumerate() {
                    inner += binom * power * prev.central[m - l];
                    power *= shift;
                }
                total += t as f64 * weights[i] * inner;
            }
            *slot = total;
        }
        out.push(MomentRow { n, mean, central, ks: None });
    }
    Ok(MomentReport { mode: MomentMode::Recursive, rows: out })
}

/// `μ_n` by the mean recursion alone.
pub fn mean_series(table: &CoefficientTable, rows: &RowTable, n_target: usize) -> Result<Vec<(usize, f64)>> {
    Ok(moments_recursive(table, rows, 1, n_target)?.means())
}

/// Worst disagreement between two moment reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentComparison {
    /// Largest `|a − b| / |a|` over entries with `|a| ≥ 1e-3`.
    pub max_relative: f64,
    /// Largest `|a − b|` over entries with `|a| < 1e-3`.
    pub max_absolute: f64,
    /// `(n, m)` of the entry furthest outside its tolerance.
    pub worst: Option<(usize, usize)>,
    pub compared: usize,
}

impl MomentComparison {
    pub const RELATIVE: f64 = 1e-9;
    pub const ABSOLUTE: f64 = 1e-12;
    const SMALL: f64 = 1e-3;

    pub fn within_tolerance(&self) -> bool {
        self.max_relative <= Self::RELATIVE && self.max_absolute <= Self::ABSOLUTE
    }
}

/// Compares `candidate` against `reference` on every shared `(n, m)`. The
/// mean is compared too and is reported as `m = usize::MAX`, since the
/// first central moment is identically zero.
pub fn compare_moments(reference: &MomentReport, candidate: &MomentReport) -> MomentComparison {
    let mut cmp = MomentComparison { max_relative: 0.0, max_absolute: 0.0, worst: None, compared: 0 };
    let mut worst_excess = 0.0;
    for a in &reference.rows {
        let Some(b) = candidate.get(a.n) else { continue };
        let pairs = std::iter::once((usize::MAX, a.mean, b.mean))
            .chain(a.central.iter().zip(&b.central).enumerate().map(|(m, (x, y))| (m, *x, *y)));
        for (m, x, y) in pairs {
            cmp.compared += 1;
            let deviation = (x - y).abs();
            let excess = if x.abs() >= MomentComparison::SMALL {
                let rel = deviation / x.abs();
                cmp.max_relative = cmp.max_relative.max(rel);
                rel / MomentComparison::RELATIVE
            } else {
                cmp.max_absolute = cmp.max_absolute.max(deviation);
                deviation / MomentComparison::ABSOLUTE
            };
            if excess > worst_excess || (excess.is_nan() && cmp.worst.is_none()) {
                worst_excess = excess;
                cmp.worst = Some((a.n, m));
            }
        }
    }
    cmp
}

/// Runs the recursion and checks it against exact direct moments of the
/// same rows, failing with [`Error::MomentDivergence`] outside tolerance.
pub fn recursive_vs_direct(
    table: &CoefficientTable,
    rows: &RowTable,
    m_max: usize,
    n_target: usize,
) -> Result<(MomentReport, MomentComparison)> {
    let recursive = moments_recursive(table, rows, m_max, n_target)?;
    let mut direct = Vec::new();
    for n in rows.first_n()..=n_target {
        let row = rows.require(n)?;
        if !row.omega().is_zero() {
            direct.push(exact_moments(row, n, m_max)?);
        }
    }
    let direct = MomentReport { mode: MomentMode::Direct, rows: direct };
    let cmp = compare_moments(&direct, &recursive);
    if !cmp.within_tolerance() {
        let (n, m) = cmp.worst.unwrap_or((n_target, 0));
        let deviation = cmp.max_relative.max(cmp.max_absolute);
        return Err(Error::MomentDivergence { n, m, deviation });
    }
    Ok((recursive, cmp))
}

/// CSV with columns `n,mean,var,m3_std,m4_std,m6_std,ks`. Missing values
/// are left empty.
pub fn write_moments_csv<W: Write>(out: W, report: &MomentReport) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    writer.write_record(["n", "mean", "var", "m3_std", "m4_std", "m6_std", "ks"]).map_err(io)?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in &report.rows {
        writer
            .write_record([
                row.n.to_string(),
                row.mean.to_string(),
                row.variance().to_string(),
                cell(row.standardized(3)),
                cell(row.standardized(4)),
                cell(row.standardized(6)),
                cell(row.ks),
            ])
            .map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{distribution, evolve, Provenance};
    use num_traits::One;

    fn binomial_rows(n: usize) -> RowTable {
        let mut seeds = RowTable::new(0);
        seeds.push(Row::new(vec![BigUint::one()], Provenance::Oracle));
        evolve(&CoefficientTable::binomial(), seeds, n).unwrap()
    }

    #[test]
    fn binomial_four() {
        let rows = binomial_rows(4);
        let m = moments_direct(&distribution(&rows, 4).unwrap(), 4);
        assert_eq!(m.mean, 2.0);
        assert_eq!(m.variance(), 1.0);
        let exact = exact_moments(rows.row(4).unwrap(), 4, 4).unwrap();
        assert_eq!(exact.central, [1.0, 0.0, 1.0, 0.0, 2.5]);
    }

    #[test]
    fn single_mass_has_no_spread() {
        let dist = Distribution { n: 0, probs: vec![0.0, 0.0, 1.0] };
        let m = moments_direct(&dist, 6);
        assert_eq!(m.mean, 2.0);
        assert!(m.central[1..].iter().all(|&c| c == 0.0));
        assert_eq!(m.standardized(4), None);
    }

    #[test]
    fn binomial_recursion() {
        let rows = binomial_rows(100);
        let report = moments_recursive(&CoefficientTable::binomial(), &rows, 6, 100).unwrap();
        let last = report.get(100).unwrap();
        assert!((last.central[2] - 25.0).abs() < 1e-10);
        assert!((last.mean - 50.0).abs() < 1e-10);
        for r in &report.rows {
            assert_eq!(r.central[0], 1.0);
            assert!(r.central[1].abs() < 1e-12);
        }
    }

    #[test]
    fn moments_csv_columns() {
        let rows = binomial_rows(10);
        let report = moments_exact_series(&rows, 0, 10, 6).unwrap();
        let mut buffer = Vec::new();
        write_moments_csv(&mut buffer, &report).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("n,mean,var,m3_std,m4_std,m6_std,ks"));
        assert_eq!(lines.next(), Some("0,0,0,,,,"));
        assert!(lines.next().unwrap().starts_with("1,0.5,0.25,0,1,1,"));
    }

    #[test]
    fn comparison_flags_divergence() {
        let rows = binomial_rows(30);
        let a = moments_exact_series(&rows, 1, 30, 4).unwrap();
        let mut b = a.clone();
        assert!(compare_moments(&a, &b).within_tolerance());
        b.rows[10].central[4] *= 1.0 + 1e-6;
        let cmp = compare_moments(&a, &b);
        assert!(!cmp.within_tolerance());
        assert_eq!(cmp.worst, Some((11, 4)));
    }
}
