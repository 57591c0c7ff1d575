//! Least-squares fits of moment series.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::convergence::log_linear_slope;
use crate::error::{Error, Result};

/// Fewest points accepted in a fit window.
pub const MIN_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// `y_n − (slope·n + intercept)` over the whole input series.
    pub residuals: Vec<(usize, f64)>,
    /// Per-step contraction of `|r_n|`, fitted on residuals above rounding
    /// noise; `None` when fewer than three such points exist.
    pub decay_rate: Option<f64>,
    pub decaying: bool,
}

/// Fits `y ≈ slope·n + intercept` over `n ∈ [lo, hi]`.
pub fn fit_linear_asymptote(series: &[(usize, f64)], window: (usize, usize)) -> Result<LinearFit> {
    let (lo, hi) = window;
    let points: Vec<(f64, f64)> = series.iter().filter(|(n, _)| (lo..=hi).contains(n)).map(|&(n, y)| (n as f64, y)).collect();
    if points.len() < MIN_WINDOW {
        return Err(Error::WindowTooShort { needed: MIN_WINDOW, got: points.len() });
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let residuals: Vec<(usize, f64)> = series.iter().map(|&(n, y)| (n, y - (slope * n as f64 + intercept))).collect();
    let noise = |y: f64| 1e-13 * y.abs().max(1.0);
    let above: Vec<(f64, f64)> = series
        .iter()
        .zip(&residuals)
        .filter(|((_, y), (_, r))| r.abs() > noise(*y))
        .map(|(_, &(n, r))| (n as f64, r.abs().ln()))
        .collect();
    let decay_rate = log_linear_slope(&above).map(f64::exp);
    Ok(LinearFit { slope, intercept, residuals, decay_rate, decaying: decay_rate.map_or(true, |r| r < 1.0) })
}

/// A polynomial in `u = (x − center) / scale`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    pub center: f64,
    pub scale: f64,
    /// Coefficients of `u^0, u^1, ...`.
    pub coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^degree` in the original variable.
    pub fn leading_coefficient(&self) -> f64 {
        self.coeffs[self.degree()] / self.scale.powi(self.degree() as i32)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let u = (x - self.center) / self.scale;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }
}

/// Least-squares polynomial of the given degree, solved by SVD on a
/// centred and scaled Vandermonde matrix.
pub fn polynomial_fit(points: &[(f64, f64)], degree: usize) -> Result<Polynomial> {
    if points.len() <= degree {
        return Err(Error::WindowTooShort { needed: degree + 1, got: points.len() });
    }
    let (lo, hi) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let center = 0.5 * (lo + hi);
    let scale = (0.5 * (hi - lo)).max(f64::MIN_POSITIVE);
    let vandermonde = DMatrix::from_fn(points.len(), degree + 1, |r, c| ((points[r].0 - center) / scale).powi(c as i32));
    let y = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let solution =
        vandermonde.svd(true, true).solve(&y, 1e-14).map_err(|e| Error::InvalidTable(format!("polynomial fit failed: {e}")))?;
    Ok(Polynomial { center, scale, coeffs: solution.iter().copied().collect() })
}
