//! Limiting mean and variance constants, central moments and Gaussian-limit
//! diagnostics for the row distributions.
//!
//! For a table with dominant root `λ₁`,
//! `C_μ = Σ t_{i,j} j / λ₁^i ÷ Σ t_{i,j} i / λ₁^i` and
//! `C_σ = Σ t_{i,j} (j − C_μ i)² / λ₁^i ÷ Σ t_{i,j} i / λ₁^i`; the numerators
//! are `C_μ*` and `C_σ*`.

mod clt;
mod fit;
mod moments;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plrs::Plrs;
use crate::table::{build_gap_table, CoefficientTable, RecurrenceTerm};

pub use clt::{
    clt_diagnostics, double_factorial, double_factorial_check, ks_distance, standard_normal_cdf, CltRow, DoubleFactorialRow,
};
pub use fit::{fit_linear_asymptote, polynomial_fit, LinearFit, Polynomial, MIN_WINDOW};
pub use moments::{
    compare_moments, exact_moments, mean_series, moments_direct, moments_exact_series, moments_recursive, recursive_vs_direct,
    write_moments_csv, MomentComparison, MomentMode, MomentReport, MomentRow,
};

/// Largest `|T(λ₁)|` accepted by [`compute_constants`].
pub const TABLE_RESIDUAL: f64 = 1e-10;

/// Constants read off a table at its dominant root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableConstants {
    pub lambda1: f64,
    pub c_mu: f64,
    pub c_sigma: f64,
    pub c_mu_star: f64,
    pub c_sigma_star: f64,
    /// `Σ t_{i,j} i / λ₁^i`.
    pub denominator: f64,
}

pub fn compute_constants(table: &CoefficientTable, lambda1: f64) -> Result<TableConstants> {
    let residual = table.reduced_residual(lambda1);
    if residual.is_nan() || residual > TABLE_RESIDUAL {
        return Err(Error::RootMismatch { residual });
    }
    let weight = |i: usize| lambda1.powi(-(i as i32));
    let sum = |f: &dyn Fn(usize, usize) -> f64| -> f64 {
        table.entries().iter().map(|(&(i, j), &t)| t as f64 * f(i, j) * weight(i)).sum()
    };
    let denominator = sum(&|i, _| i as f64);
    if denominator.is_nan() || denominator <= 0.0 {
        return Err(Error::InvalidTable(format!("Σ t_ij i / λ^i = {denominator} is not positive")));
    }
    let c_mu_star = sum(&|_, j| j as f64);
    let c_mu = c_mu_star / denominator;
    let c_sigma_star = sum(&|i, j| (j as f64 - c_mu * i as f64).powi(2));
    Ok(TableConstants { lambda1, c_mu, c_sigma: c_sigma_star / denominator, c_mu_star, c_sigma_star, denominator })
}

/// Everything known about the limiting behaviour of one statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    pub lambda1: f64,
    pub c_mu: f64,
    pub c_sigma: f64,
    pub c_mu_star: f64,
    pub c_sigma_star: f64,
    /// The statistic is identically zero on every interval.
    pub trivial: bool,
    /// Slopes of the fitted lines for `μ_n` and `σ_n²`.
    pub fitted_c_mu: f64,
    pub fitted_c_sigma: f64,
    pub fitted_d_mu: f64,
    pub fitted_d_sigma: f64,
    /// Per-step contraction of the fit residuals, when measurable.
    pub fitted_gamma_mu: Option<f64>,
    pub fitted_gamma_sigma: Option<f64>,
}

/// Triviality and the substituted constants of the gap-`g` statistic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Positivity {
    pub g: usize,
    pub trivial: bool,
    pub lambda1: f64,
    pub c_mu_star: f64,
    pub c_sigma_star: f64,
    pub c_mu: f64,
    pub c_sigma: f64,
}

/// Decides whether `K_{g,n}` is identically zero and evaluates `C_μ*`, `C_σ*`
/// by substituting `y / λ₁^x` (resp. `(y − C_μ x)² / λ₁^x`) for each term
/// `p_{g,n−x,k−y}` of the recurrence.
///
/// Gaps of size 0 never occur exactly when `c_i = 1` for `i < L` and
/// `c_L ≤ 2`; gaps of size 1 never occur only for the Fibonacci
/// coefficients `(1, 1)`; larger gaps always occur.
pub fn check_positivity(plrs: &Plrs, g: usize) -> Result<Positivity> {
    let table = build_gap_table(plrs, g)?;
    let lambda1 = plrs.dominant_root()?.lambda1;
    let c = plrs.coeffs();
    let l = c.len();
    let trivial = match g {
        0 => c[..l - 1].iter().all(|&x| x == 1) && c[l - 1] <= 2,
        1 => c == [1, 1],
        _ => false,
    };
    let substitute = |f: &dyn Fn(&RecurrenceTerm) -> f64| -> f64 {
        table.terms().iter().map(|term| term.coefficient as f64 * f(term) * lambda1.powi(-(term.lag as i32))).sum()
    };
    let denominator: f64 =
        c.iter().enumerate().map(|(t, &ci)| f64::from(ci) * (t + 1) as f64 * lambda1.powi(-(t as i32 + 1))).sum();
    let c_mu_star = substitute(&|term| term.shift as f64);
    let c_mu = c_mu_star / denominator;
    let c_sigma_star = substitute(&|term| (term.shift as f64 - c_mu * term.lag as f64).powi(2));
    Ok(Positivity { g, trivial, lambda1, c_mu_star, c_sigma_star, c_mu, c_sigma: c_sigma_star / denominator })
}

/// `x^y (zw)² + x(1 − 2z(w + y − 1)) − (1 − 2z(w + y))`.
pub fn appendix_inequality(x: f64, y: u32, z: f64, w: u32) -> f64 {
    let (yf, wf) = (f64::from(y), f64::from(w));
    x.powi(y as i32) * (z * wf).powi(2) + (x * (1.0 - 2.0 * z * (wf + yf - 1.0)) - (1.0 - 2.0 * z * (wf + yf)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepResult {
    pub minimum: f64,
    pub argmin: (f64, u32, f64, u32),
    pub points: usize,
}

/// Minimum of [`appendix_inequality`] over `x ∈ {1, 1.25, ..., 10}`,
/// `y ∈ 2..=8`, `z ∈ {0, 0.05, ..., 5}`, `w ∈ 1..=8`.
pub fn inequality_sweep() -> SweepResult {
    let mut best = SweepResult { minimum: f64::INFINITY, argmin: (0.0, 0, 0.0, 0), points: 0 };
    for a in 0..=36 {
        let x = 1.0 + 0.25 * f64::from(a);
        for y in 2..=8 {
            for b in 0..=100 {
                let z = 0.05 * f64::from(b);
                for w in 1..=8 {
                    let value = appendix_inequality(x, y, z, w);
                    best.points += 1;
                    if value < best.minimum {
                        best.minimum = value;
                        best.argmin = (x, y, z, w);
                    }
                }
            }
        }
    }
    best
}
