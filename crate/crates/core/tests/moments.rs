use plrs_gaps::asymptotics::{
    compute_constants, double_factorial_check, exact_moments, fit_linear_asymptote, mean_series, moments_direct,
    moments_exact_series, moments_recursive, recursive_vs_direct,
};
use plrs_gaps::zeckendorf::{enumerate_interval, GapSelection};
use plrs_gaps::{analyze, binomial_rows, distribution, evolve_statistic, CoefficientTable, Plrs, Statistic, DEFAULT_BUDGET};

#[test]
fn mean_recursion_matches_direct_means() {
    for c in [&[1u32, 1][..], &[2, 1, 1], &[1, 2]] {
        let plrs = Plrs::new(c).unwrap();
        for stat in [Statistic::Summands, Statistic::Gap(0), Statistic::Gap(2)] {
            let evolved = evolve_statistic(&plrs, stat, 300, DEFAULT_BUDGET).unwrap();
            for (n, mean) in mean_series(&evolved.table, &evolved.rows, 300).unwrap() {
                let direct = exact_moments(evolved.rows.row(n).unwrap(), n, 1).unwrap().mean;
                let tolerance = 1e-12 * direct.abs().max(1e-3);
                assert!((mean - direct).abs() <= tolerance, "{c:?} {stat} n={n}: {mean} vs {direct}");
            }
        }
    }
}

#[test]
fn fibonacci_summand_mean_matches_enumeration() {
    let fib = Plrs::fibonacci();
    let evolved = evolve_statistic(&fib, Statistic::Summands, 20, DEFAULT_BUDGET).unwrap();
    let direct = moments_direct(&distribution(&evolved.rows, 20).unwrap(), 2);
    let counts = enumerate_interval(&fib, 20, GapSelection::All, DEFAULT_BUDGET).unwrap();
    let total: u64 = counts.summand_row().iter().enumerate().map(|(k, &c)| k as u64 * c).sum();
    let empirical = total as f64 / counts.total() as f64;
    assert!((direct.mean - empirical).abs() <= 1e-12);
}

#[test]
fn fibonacci_gap_two_fourth_moment_two_ways() {
    let evolved = evolve_statistic(&Plrs::fibonacci(), Statistic::Gap(2), 60, DEFAULT_BUDGET).unwrap();
    let (recursive, cmp) = recursive_vs_direct(&evolved.table, &evolved.rows, 6, 60).unwrap();
    let direct = exact_moments(evolved.rows.row(60).unwrap(), 60, 4).unwrap().central[4];
    let rec = recursive.get(60).unwrap().central[4];
    assert!(((rec - direct) / direct).abs() <= 1e-9);
    assert!(cmp.within_tolerance());
    for row in &recursive.rows {
        assert!((row.central[0] - 1.0).abs() <= 1e-12);
        assert!(row.central[1].abs() <= 1e-12);
        assert!(row.variance() >= 0.0);
    }
}

#[test]
fn binomial_recursive_variance() {
    let rows = binomial_rows(100);
    let report = moments_recursive(&CoefficientTable::binomial(), &rows, 2, 100).unwrap();
    assert!((report.get(100).unwrap().central[2] - 25.0).abs() <= 1e-9);
}

#[test]
fn binomial_means_fit_exactly() {
    let rows = binomial_rows(300);
    let report = moments_exact_series(&rows, 0, 300, 2).unwrap();
    let fit = fit_linear_asymptote(&report.means(), (100, 300)).unwrap();
    assert!((fit.slope - 0.5).abs() <= 1e-12);
    assert!(fit.intercept.abs() <= 1e-12);
}

#[test]
fn fibonacci_summand_slope_matches_the_constant() {
    let fib = Plrs::fibonacci();
    let evolved = evolve_statistic(&fib, Statistic::Summands, 400, DEFAULT_BUDGET).unwrap();
    let report = moments_exact_series(&evolved.rows, 100, 400, 6).unwrap();
    let lambda = fib.dominant_root().unwrap().lambda1;
    let constants = compute_constants(&evolved.table, lambda).unwrap();
    let fit = fit_linear_asymptote(&report.means(), (100, 400)).unwrap();
    assert!((fit.slope - constants.c_mu).abs() <= 1e-8);
    let checks = double_factorial_check(&report, constants.c_sigma, (200, 400), 3).unwrap();
    assert!((checks[0].fitted - constants.c_sigma).abs() <= 1e-8);
    assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
}

#[test]
fn fitted_residuals_decay() {
    let c = analyze(&Plrs::new(&[2, 1]).unwrap(), Statistic::Gap(2), 300, DEFAULT_BUDGET).unwrap();
    assert!(!c.trivial);
    assert!(c.c_mu > 0.0 && c.c_sigma > 0.0);
    assert!((c.fitted_c_mu - c.c_mu).abs() < 1e-8);
    assert!((c.fitted_c_sigma - c.c_sigma).abs() < 1e-6);
    if let Some(gamma) = c.fitted_gamma_mu {
        assert!(gamma < 1.0);
    }
}
