//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;
use plrs_gaps::asymptotics::{
    check_positivity, clt_diagnostics, compute_constants, double_factorial_check, exact_moments, fit_linear_asymptote,
    inequality_sweep, moments_exact_series, recursive_vs_direct,
};
use plrs_gaps::engine::omega_ratio_series;
use plrs_gaps::zeckendorf::{enumerate_interval, GapSelection, IntervalCounts};
use plrs_gaps::{
    binomial_rows, build_table, evolve, seed_rows, CoefficientTable, Plrs, Provenance, RowTable, Statistic, DEFAULT_BUDGET,
};

const SUITE: [&[u32]; 5] = [&[1, 1], &[1, 1, 1], &[2, 1], &[1, 2], &[2, 1, 1]];
const MODES: [Statistic; 5] = [Statistic::Summands, Statistic::Gap(0), Statistic::Gap(1), Statistic::Gap(2), Statistic::Gap(3)];
const DEPTH: usize = 500;

struct Case {
    plrs: Plrs,
    stat: Statistic,
    table: CoefficientTable,
    rows: RowTable,
}

fn suite_cases() -> Vec<Case> {
    let mut cases = Vec::new();
    for c in SUITE {
        let plrs = Plrs::new(c).unwrap();
        for stat in MODES {
            let table = build_table(&plrs, stat).unwrap();
            let seeds = seed_rows(&plrs, &table, DEFAULT_BUDGET).unwrap();
            let rows = evolve(&table, seeds, DEPTH).unwrap();
            cases.push(Case { plrs: plrs.clone(), stat, table, rows });
        }
    }
    cases
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn label(case: &Case) -> String {
    format!("({}) {}", case.plrs, case.stat)
}

/// Brute-force tallies for `n = 1..=n_max`, the largest `n` with
/// `G_{n+1} − G_n ≤ 10⁶`.
struct OracleRun {
    plrs: Plrs,
    rows: BTreeMap<usize, IntervalCounts>,
}

fn oracle_runs() -> Vec<OracleRun> {
    let limit = BigUint::from(1_000_000u32);
    SUITE
        .iter()
        .map(|c| {
            let plrs = Plrs::new(c).unwrap();
            let seq = plrs.sequence(80);
            let n_max = (1..79).take_while(|&n| seq.interval_size(n) <= limit).last().unwrap();
            let rows =
                (1..=n_max).map(|n| (n, enumerate_interval(&plrs, n, GapSelection::All, DEFAULT_BUDGET).unwrap())).collect();
            OracleRun { plrs, rows }
        })
        .collect()
}

fn oracle_equivalence(cases: &[Case], oracle: &[OracleRun]) -> Outcome {
    let mut compared = 0usize;
    let mut evolved = 0usize;
    let mut failures = Vec::new();
    for run in oracle {
        for case in cases.iter().filter(|case| case.plrs == run.plrs) {
            for (&n, counts) in run.rows.range(case.table.n0()..) {
                let row = case.rows.row(n).unwrap();
                compared += 1;
                if row.provenance() == Provenance::Evolved {
                    evolved += 1;
                }
                if counts.row_big(case.stat).unwrap() != row.dense() {
                    failures.push(format!("{} n={n}", label(case)));
                }
            }
        }
    }
    outcome(failures.is_empty() && evolved > 0, format!("{compared} rows compared ({evolved} evolved), mismatches: {failures:?}"))
}

fn row_sum_conservation(cases: &[Case]) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for case in cases {
        let seq = case.plrs.sequence(DEPTH + 1);
        for (n, row) in case.rows.iter() {
            checked += 1;
            if *row.omega() != seq.interval_size(n) {
                failures.push(format!("{} n={n}", label(case)));
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} rows up to n = {DEPTH}, failures: {failures:?}"))
}

fn binomial_calibration() -> Outcome {
    let rows = binomial_rows(1000);
    let mut pascal_ok = true;
    for n in 0..=200usize {
        let mut expected = vec![BigUint::one()];
        for k in 1..=n {
            let next = expected[k - 1].clone() * BigUint::from(n - k + 1) / BigUint::from(k);
            expected.push(next);
        }
        pascal_ok &= rows.row(n).unwrap().dense() == expected;
    }
    let table = CoefficientTable::binomial();
    let lambda = table.dominant_root().unwrap();
    let constants = compute_constants(&table, lambda).unwrap();
    let constants_ok = (constants.c_mu - 0.5).abs() <= 1e-12 && (constants.c_sigma - 0.25).abs() <= 1e-12;
    let m = exact_moments(rows.row(1000).unwrap(), 1000, 2).unwrap();
    let mean_err = (m.mean - 500.0).abs() / 500.0;
    let var_err = (m.variance() - 250.0).abs() / 250.0;
    outcome(
        pascal_ok && constants_ok && mean_err <= 1e-9 && var_err <= 1e-9,
        format!(
            "Pascal rows 0..=200 exact: {pascal_ok}; C_μ = {}, C_σ = {}; n=1000 mean rel err {mean_err:.1e}, var rel err {var_err:.1e}",
            constants.c_mu, constants.c_sigma
        ),
    )
}

fn fibonacci_summands(cases: &[Case]) -> &Case {
    cases.iter().find(|c| c.plrs == Plrs::fibonacci() && c.stat == Statistic::Summands).unwrap()
}

fn fibonacci_gap_two(cases: &[Case]) -> &Case {
    cases.iter().find(|c| c.plrs == Plrs::fibonacci() && c.stat == Statistic::Gap(2)).unwrap()
}

fn lekkerkerker(cases: &[Case]) -> Outcome {
    let case = fibonacci_summands(cases);
    let mut means = Vec::new();
    let mut variances = Vec::new();
    for n in 100..=400 {
        let m = exact_moments(case.rows.row(n).unwrap(), n, 2).unwrap();
        means.push((n, m.mean));
        variances.push((n, m.variance()));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mean_slope = fit_linear_asymptote(&means, (100, 400)).unwrap().slope;
    let var_slope = fit_linear_asymptote(&variances, (100, 400)).unwrap().slope;
    let mean_err = (mean_slope - 1.0 / (phi + 2.0)).abs();
    let var_err = (var_slope - 1.0 / (5.0 * 5f64.sqrt())).abs();
    outcome(
        mean_err <= 1e-8 && var_err <= 1e-6,
        format!("mean slope {mean_slope:.10} (err {mean_err:.1e}), variance slope {var_slope:.10} (err {var_err:.1e})"),
    )
}

fn moment_recursion(cases: &[Case]) -> Outcome {
    let mut worst = (0.0f64, 0.0f64, String::new());
    let mut failures = Vec::new();
    for case in cases {
        match recursive_vs_direct(&case.table, &case.rows, 6, 200) {
            Ok((_, cmp)) => {
                if cmp.max_relative > worst.0 {
                    worst = (cmp.max_relative, cmp.max_absolute, label(case));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", label(case))),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} tables, worst relative deviation {:.1e} in {}; failures: {failures:?}", cases.len(), worst.0, worst.2),
    )
}

fn double_factorial_law(cases: &[Case]) -> Outcome {
    let mut parts = Vec::new();
    let mut passed = true;
    for case in [fibonacci_summands(cases), fibonacci_gap_two(cases)] {
        let lambda = case.plrs.dominant_root().unwrap().lambda1;
        let c_sigma = compute_constants(&case.table, lambda).unwrap().c_sigma;
        let report = moments_exact_series(&case.rows, 200, 400, 4).unwrap();
        let check = double_factorial_check(&report, c_sigma, (200, 400), 2).unwrap();
        let m2 = check[1];
        passed &= m2.passed();
        parts.push(format!(
            "{}: fitted {:.6} vs 3C_σ² = {:.6} ({:.2}%)",
            label(case),
            m2.fitted,
            m2.expected,
            100.0 * m2.relative_error
        ));
    }
    outcome(passed, parts.join("; "))
}

fn gaussian_convergence(cases: &[Case]) -> Outcome {
    let case = fibonacci_gap_two(cases);
    let report = moments_exact_series(&case.rows, 100, 500, 4).unwrap();
    let diag = clt_diagnostics(&report, 4).unwrap();
    let at = |n: usize| diag.iter().find(|d| d.n == n).unwrap();
    let (early, late) = (at(100), at(500));
    let m3 = late.standardized[3];
    let m4 = late.standardized[4];
    let (ks100, ks500) = (early.ks.unwrap(), late.ks.unwrap());
    let checks = [m3.abs() <= 0.05, (m4 - 3.0).abs() <= 0.05, ks500 <= 0.02, ks500 < ks100];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "n=500: m3 = {m3:.4} (≤ 0.05: {}), m4 − 3 = {:.4} (≤ 0.05: {}), KS = {ks500:.5} (≤ 0.02: {}); KS n=100 = {ks100:.5} (decreasing: {})",
            checks[0],
            m4 - 3.0,
            checks[1],
            checks[2],
            checks[3]
        ),
    )
}

fn triviality(oracle: &[OracleRun]) -> Outcome {
    let mut disagreements = Vec::new();
    let mut expectation_misses = Vec::new();
    for run in oracle {
        let plrs = &run.plrs;
        for g in 0..=3 {
            let p = check_positivity(plrs, g).unwrap();
            let single_mass = run.rows.values().all(|counts| counts.gap_row(g).unwrap().len() == 1);
            if single_mass != p.trivial {
                disagreements.push(format!("({plrs}) g={g}"));
            }
            let expected_trivial = plrs.coeffs() == [1, 1] && g <= 1;
            let ok = if expected_trivial { p.trivial } else { !p.trivial && p.c_mu > 0.0 && p.c_sigma > 0.0 };
            if !ok {
                expectation_misses.push(format!("({plrs}) g={g} trivial={}", p.trivial));
            }
        }
    }
    outcome(
        disagreements.is_empty() && expectation_misses.is_empty(),
        format!("oracle disagreements: {disagreements:?}; pairs outside the expected flags: {expectation_misses:?}"),
    )
}

fn spectral(cases: &[Case]) -> Outcome {
    let mut worst_residual = 0.0f64;
    for c in SUITE {
        worst_residual = worst_residual.max(Plrs::new(c).unwrap().dominant_root().unwrap().residual);
    }
    let mut worst_ratio = (0.0f64, String::new());
    for case in cases {
        let lambda = case.plrs.dominant_root().unwrap().lambda1;
        let report = omega_ratio_series(&case.rows, lambda).unwrap();
        let e = report.error_at(200).unwrap();
        if e >= worst_ratio.0 {
            worst_ratio = (e, label(case));
        }
    }
    let binomial = omega_ratio_series(&binomial_rows(200), 2.0).unwrap().error_at(200).unwrap();
    outcome(
        worst_residual <= 1e-12 && worst_ratio.0 <= 1e-8 && binomial <= 1e-8,
        format!(
            "max |T(λ₁)| = {worst_residual:.1e}; max |Ω_199/Ω_200 − 1/λ₁| = {:.1e} ({}); binomial {binomial:.1e}",
            worst_ratio.0, worst_ratio.1
        ),
    )
}

fn inequality() -> Outcome {
    let sweep = inequality_sweep();
    outcome(
        sweep.minimum >= -1e-9,
        format!("minimum {:.3e} at (x, y, z, w) = {:?} over {} points", sweep.minimum, sweep.argmin, sweep.points),
    )
}

fn main() {
    let start = Instant::now();
    let cases = suite_cases();
    println!("evolved {} suite tables to n = {DEPTH} in {:.1?}", cases.len(), start.elapsed());
    let start = Instant::now();
    let oracle = oracle_runs();
    println!("enumerated oracle rows for {} recurrences in {:.1?}", oracle.len(), start.elapsed());

    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", Box::new(|| oracle_equivalence(&cases, &oracle))),
        ("row-sum conservation", Box::new(|| row_sum_conservation(&cases))),
        ("binomial calibration", Box::new(binomial_calibration)),
        ("Lekkerkerker slopes", Box::new(|| lekkerkerker(&cases))),
        ("moment-recursion fidelity", Box::new(|| moment_recursion(&cases))),
        ("double-factorial law", Box::new(|| double_factorial_law(&cases))),
        ("Gaussian convergence", Box::new(|| gaussian_convergence(&cases))),
        ("triviality and positivity", Box::new(|| triviality(&oracle))),
        ("spectral checks", Box::new(|| spectral(&cases))),
        ("inequality sweep", Box::new(inequality)),
    ];
    let mut failed = 0;
    for (number, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let status = if result.passed { "PASS" } else { "FAIL" };
        if !result.passed {
            failed += 1;
        }
        println!("criterion {:>2} [{status}] {name}: {} ({:.1?})", number + 1, result.detail, t.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
