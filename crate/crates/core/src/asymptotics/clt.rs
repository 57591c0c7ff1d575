//! Moment matching and Kolmogorov distance against the normal law.

use serde::Serialize;

use super::fit::polynomial_fit;
use super::moments::MomentReport;
use crate::engine::Distribution;
use crate::error::{Error, Result};

/// `(2m − 1)!!`, the `2m`-th moment of a standard normal; `1` for `m = 0`.
pub fn double_factorial(m: usize) -> f64 {
    (1..=m).map(|i| (2 * i - 1) as f64).product()
}

/// Standardized moment of order `m` of `N(0, 1)`.
fn normal_moment(m: usize) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        double_factorial(m / 2)
    }
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// `max_k |F(k) − Φ((k + ½ − μ)/σ)|`: the lattice CDF is compared with the
/// normal CDF at the upper edge of each atom's unit cell.
pub fn ks_distance(dist: &Distribution, mean: f64, sd: f64) -> f64 {
    let phi = |x: f64| standard_normal_cdf((x - mean) / sd);
    let mut worst = phi(-0.5).abs();
    let mut cdf = 0.0;
    for (k, p) in dist.probs.iter().enumerate() {
        cdf += p;
        worst = worst.max((cdf.min(1.0) - phi(k as f64 + 0.5)).abs());
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltRow {
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    /// `μ̃_n(m) / σ_n^m` for `m = 0..=m_max`.
    pub standardized: Vec<f64>,
    /// Standardized moment minus the normal moment (`0` or `(m − 1)!!`).
    pub deviations: Vec<f64>,
    pub ks: Option<f64>,
}

/// Standardized moments and their distance from the normal ones for every
/// row of `report`. `m_max` must be even and every variance positive.
pub fn clt_diagnostics(report: &MomentReport, m_max: usize) -> Result<Vec<CltRow>> {
    if m_max % 2 == 1 {
        return Err(Error::OddMomentOrder(m_max));
    }
    report
        .rows
        .iter()
        .map(|row| {
            let variance = row.variance();
            if variance.is_nan() || variance <= 0.0 {
                return Err(Error::DegenerateVariance { n: row.n });
            }
            let standardized: Vec<f64> = (0..=m_max)
                .map(|m| row.standardized(m).ok_or(Error::IndexOutOfRange { n: row.n, reason: "moment order above m_max" }))
                .collect::<Result<_>>()?;
            let deviations = standardized.iter().enumerate().map(|(m, s)| s - normal_moment(m)).collect();
            Ok(CltRow { n: row.n, mean: row.mean, variance, standardized, deviations, ks: row.ks })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleFactorialRow {
    pub m: usize,
    pub fitted: f64,
    pub expected: f64,
    pub relative_error: f64,
}

impl DoubleFactorialRow {
    pub const TOLERANCE: f64 = 0.02;

    pub fn passed(&self) -> bool {
        self.relative_error <= Self::TOLERANCE
    }
}

/// Fits a degree-`m` polynomial in `n` to `μ̃_n(2m)` over `window` and
/// compares its leading coefficient with `(2m − 1)!! C_σ^m`, for
/// `m = 1..=max_m`.
pub fn double_factorial_check(
    report: &MomentReport,
    c_sigma: f64,
    window: (usize, usize),
    max_m: usize,
) -> Result<Vec<DoubleFactorialRow>> {
    (1..=max_m)
        .map(|m| {
            let points: Vec<(f64, f64)> = report
                .central_series(2 * m)
                .into_iter()
                .filter(|(n, _)| (window.0..=window.1).contains(n))
                .map(|(n, v)| (n as f64, v))
                .collect();
            let fitted = polynomial_fit(&points, m)?.leading_coefficient();
            let expected = double_factorial(m) * c_sigma.powi(m as i32);
            Ok(DoubleFactorialRow { m, fitted, expected, relative_error: ((fitted - expected) / expected).abs() })
        })
        .collect()
}
