//! Parameter grids.

use crate::error::{Error, Result};

/// `points` values log-spaced on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) || points == 0 {
        return Err(Error::InvalidParameter(format!(
            "log grid needs 0 < lo <= hi and at least one point, got [{lo}, {hi}] x {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => lo,
            _ if i == points - 1 => hi,
            _ => (a + step * i as f64).exp(),
        })
        .collect())
}

/// `lo, lo + step, ...` up to `hi` (inclusive, with a small slack for round-off).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "linear grid needs lo <= hi and step > 0, got {lo}:{hi}:{step}"
        )));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    // Rounded to 12 decimals so that 0.05 * 3 prints as 0.15.
    Ok((0..=count)
        .map(|i| ((lo + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

/// Crossover probabilities used by the exhaustive verifiers: `0.05, ..., 0.45, 0.49`.
pub fn default_alpha_grid() -> Vec<f64> {
    let mut grid = linear_grid(0.05, 0.45, 0.05).expect("static grid");
    grid.push(0.49);
    grid
}
