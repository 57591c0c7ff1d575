//! Geometric convergence of consecutive-term ratios.
//!
//! Both `G_{n-1}/G_n` and `Ω_{n-1}/Ω_n` approach `1/λ₁` at a rate set by the
//! subdominant roots. Complex subdominant roots make the error oscillate, so
//! "eventually decreasing" is judged on block maxima rather than term by term.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::ratio::ratio_to_f64;

/// First index from which the error series is expected to shrink.
pub const SETTLE_INDEX: usize = 20;
/// Width of the blocks whose maxima must decrease.
pub const BLOCK: usize = 8;
/// Errors at or below this level are rounding noise in the `f64` ratio.
pub const NOISE_FLOOR: f64 = 16.0 * f64::EPSILON;

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    /// `(n, |x_{n-1}/x_n − 1/λ₁|)` for each consecutive pair.
    pub errors: Vec<(usize, f64)>,
    /// Fitted per-step contraction factor of the error, when enough points sit
    /// above the noise floor to fit one.
    pub decay_rate: Option<f64>,
    /// Block maxima after [`SETTLE_INDEX`] strictly decrease until they reach
    /// the noise floor.
    pub eventually_decreasing: bool,
}

impl ConvergenceReport {
    pub fn error_at(&self, n: usize) -> Option<f64> {
        self.errors.iter().find(|(m, _)| *m == n).map(|(_, e)| *e)
    }

    pub fn passed(&self) -> bool {
        self.eventually_decreasing
    }
}

/// Builds the report for the consecutive terms `terms[t] = x_{first + t}`.
pub(crate) fn ratio_convergence(first: usize, terms: &[&BigUint], lambda1: f64) -> ConvergenceReport {
    let target = 1.0 / lambda1;
    let errors: Vec<(usize, f64)> = terms
        .windows(2)
        .enumerate()
        .filter(|(_, w)| !w[1].is_zero())
        .map(|(t, w)| (first + t + 1, (ratio_to_f64(w[0], w[1]) - target).abs()))
        .collect();
    summarize(errors)
}

pub(crate) fn summarize(errors: Vec<(usize, f64)>) -> ConvergenceReport {
    let settled: Vec<(usize, f64)> = errors.iter().copied().filter(|(n, _)| *n >= SETTLE_INDEX).collect();
    let maxima: Vec<f64> =
        settled.chunks(BLOCK).filter(|c| c.len() == BLOCK).map(|c| c.iter().map(|(_, e)| *e).fold(0.0, f64::max)).collect();
    let eventually_decreasing = maxima.windows(2).all(|w| w[1] < w[0] || w[1] <= NOISE_FLOOR);

    let above: Vec<(f64, f64)> = errors.iter().filter(|(_, e)| *e > NOISE_FLOOR).map(|(n, e)| (*n as f64, e.ln())).collect();
    let decay_rate = log_linear_slope(&above).map(f64::exp);

    ConvergenceReport { errors, decay_rate, eventually_decreasing }
}

/// Least-squares slope of `y` against `x`; `None` below three points.
pub(crate) fn log_linear_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 3 {
        return None;
    }
    let len = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / len;
    let my = points.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
