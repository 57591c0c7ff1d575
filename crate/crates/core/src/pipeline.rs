//! End-to-end helpers: oracle seeding, evolution and constant fitting.

use num_bigint::BigUint;
use serde::Serialize;

use crate::asymptotics::{check_positivity, compute_constants, exact_moments, fit_linear_asymptote, AsymptoticConstants};
use crate::engine::{evolve, Provenance, Row, RowTable};
use crate::error::{Error, Result};
use crate::plrs::Plrs;
use crate::table::{build_table, CoefficientTable};
use crate::zeckendorf::{enumerate_interval, GapSelection, Statistic};

/// Brute-force rows `first..=last` for one statistic.
pub fn oracle_rows(plrs: &Plrs, stat: Statistic, first: usize, last: usize, budget: u64) -> Result<RowTable> {
    let mut rows = RowTable::new(first);
    for n in first..=last {
        let counts = enumerate_interval(plrs, n, GapSelection::for_statistic(stat), budget)?;
        let row = counts.row_big(stat).expect("statistic was tallied");
        rows.push(Row::new(row, Provenance::Oracle));
    }
    Ok(rows)
}

/// The `i₀` oracle rows starting at `n₀` that the engine is seeded with.
pub fn seed_rows(plrs: &Plrs, table: &CoefficientTable, budget: u64) -> Result<RowTable> {
    let stat = table.kind().statistic().ok_or_else(|| Error::InvalidTable("custom tables have no oracle".into()))?;
    oracle_rows(plrs, stat, table.n0(), table.n0() + table.i0() - 1, budget)
}

/// A table together with its rows from `n₀` through some target.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub table: CoefficientTable,
    pub rows: RowTable,
}

pub fn evolve_statistic(plrs: &Plrs, stat: Statistic, n_target: usize, budget: u64) -> Result<Evolved> {
    let table = build_table(plrs, stat)?;
    let seeds = seed_rows(plrs, &table, budget)?;
    let rows = evolve(&table, seeds, n_target)?;
    Ok(Evolved { table, rows })
}

/// Rows `1..=n` of the binomial table, seeded with `p_{0,·} = (1)`.
pub fn binomial_rows(n: usize) -> RowTable {
    let mut seeds = RowTable::new(0);
    seeds.push(Row::new(vec![BigUint::from(1u32)], Provenance::Oracle));
    evolve(&CoefficientTable::binomial(), seeds, n).expect("binomial rows never go negative")
}

/// Closed-form constants plus line fits of `μ_n` and `σ_n²` over
/// `[n_target / 4, n_target]`.
pub fn analyze(plrs: &Plrs, stat: Statistic, n_target: usize, budget: u64) -> Result<AsymptoticConstants> {
    let Evolved { table, rows } = evolve_statistic(plrs, stat, n_target, budget)?;
    let lambda1 = plrs.dominant_root()?.lambda1;
    let constants = compute_constants(&table, lambda1)?;
    let trivial = match stat {
        Statistic::Gap(g) => check_positivity(plrs, g)?.trivial,
        Statistic::Summands => false,
    };
    let mut means = Vec::new();
    let mut variances = Vec::new();
    for (n, row) in rows.iter() {
        if row.is_empty() {
            continue;
        }
        let m = exact_moments(row, n, 2)?;
        means.push((n, m.mean));
        variances.push((n, m.variance()));
    }
    let window = (n_target / 4, n_target);
    let mean_fit = fit_linear_asymptote(&means, window)?;
    let var_fit = fit_linear_asymptote(&variances, window)?;
    Ok(AsymptoticConstants {
        lambda1,
        c_mu: constants.c_mu,
        c_sigma: constants.c_sigma,
        c_mu_star: constants.c_mu_star,
        c_sigma_star: constants.c_sigma_star,
        trivial,
        fitted_c_mu: mean_fit.slope,
        fitted_c_sigma: var_fit.slope,
        fitted_d_mu: mean_fit.intercept,
        fitted_d_sigma: var_fit.intercept,
        fitted_gamma_mu: mean_fit.decay_rate,
        fitted_gamma_sigma: var_fit.decay_rate,
    })
}

/// Where an evolved row first disagrees with the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub n: usize,
    pub k: usize,
    pub oracle: String,
    pub evolved: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub n0: usize,
    /// Last oracle-seeded row; evolved rows start after it.
    pub last_seed: usize,
    pub depth: usize,
    /// Evolved rows compared against the oracle.
    pub rows_checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Seeds `table` with oracle rows, evolves it to `depth` and compares every
/// entry of every evolved row with brute force.
pub fn validate_table(table: &CoefficientTable, plrs: &Plrs, depth: usize, budget: u64) -> Result<ValidationReport> {
    let stat = table.kind().statistic().ok_or_else(|| Error::InvalidTable("custom tables have no oracle".into()))?;
    let seeds = seed_rows(plrs, table, budget)?;
    let last_seed = seeds.last_n().expect("i₀ ≥ 1 seed rows");
    let rows = evolve(table, seeds, depth)?;
    let mut report = ValidationReport { n0: table.n0(), last_seed, depth, rows_checked: 0, mismatches: Vec::new() };
    for n in last_seed + 1..=depth {
        let oracle = oracle_rows(plrs, stat, n, n, budget)?;
        let expected = oracle.require(n)?;
        let got = rows.require(n)?;
        report.rows_checked += 1;
        for k in 0..expected.end().max(got.end()) {
            let (a, b) = (expected.get(k), got.get(k));
            if a != b {
                report.mismatches.push(Mismatch { n, k, oracle: a.to_string(), evolved: b.to_string() });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_gap_two_validates() {
        let fib = Plrs::fibonacci();
        let table = build_table(&fib, Statistic::Gap(2)).unwrap();
        let report = validate_table(&table, &fib, 25, crate::DEFAULT_BUDGET).unwrap();
        assert!(report.passed(), "{:?}", report.mismatches);
        assert_eq!(report.last_seed, 7);
        assert_eq!(report.rows_checked, 18);
    }

    #[test]
    fn fibonacci_gap_one_stays_at_zero() {
        let fib = Plrs::fibonacci();
        let table = build_table(&fib, Statistic::Gap(1)).unwrap();
        let report = validate_table(&table, &fib, 25, crate::DEFAULT_BUDGET).unwrap();
        assert!(report.passed());
        let rows = evolve_statistic(&fib, Statistic::Gap(1), 60, crate::DEFAULT_BUDGET).unwrap().rows;
        assert!(rows.iter().all(|(_, row)| row.end() == 1));
    }

    #[test]
    fn tribonacci_summands_validate() {
        let trib = Plrs::new(&[1, 1, 1]).unwrap();
        let report = validate_table(&build_table(&trib, Statistic::Summands).unwrap(), &trib, 20, crate::DEFAULT_BUDGET).unwrap();
        assert!(report.passed());
        assert!(report.rows_checked > 10);
    }

    #[test]
    fn depth_beyond_budget_is_an_error() {
        let fib = Plrs::fibonacci();
        let table = build_table(&fib, Statistic::Summands).unwrap();
        assert!(matches!(validate_table(&table, &fib, 30, 1000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn fibonacci_summand_analysis() {
        let c = analyze(&Plrs::fibonacci(), Statistic::Summands, 200, crate::DEFAULT_BUDGET).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((c.fitted_c_mu - 1.0 / (phi + 2.0)).abs() < 1e-8);
        assert!((c.fitted_c_sigma - c.c_sigma).abs() < 1e-6);
        assert!(!c.trivial);
    }
}
