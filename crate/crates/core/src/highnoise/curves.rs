//! High-noise threshold functions.
//!
//! `t_new(λ) = λ + λ (ln 1/λ)^{3/2}` against `t_old(λ) = λ^{1/3} (ln 1/λ)^{3/2}`.
//! Their ratio is `λ^{2/3} (1 + (ln 1/λ)^{−3/2})`, which is increasing in `λ`
//! and crosses 1 near `λ ≈ 0.361`, below `1/e`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::highnoise::fit::scaling_fit;

#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct ThresholdRow {
    pub lambda: f64,
    pub t_new: f64,
    pub t_old: f64,
    pub ratio: f64,
    /// `λ^{2/3}`, the ratio without the additive `λ` term of `t_new`.
    pub leading_ratio: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ThresholdReport {
    pub rows: Vec<ThresholdRow>,
    /// The ratio strictly increases along the (increasing) grid.
    pub ratio_increasing: bool,
    /// Every ratio on the grid is below 1.
    pub ratio_below_one: bool,
    /// Fitted log-log slope of `t_new` minus that of `t_old`, when the grid
    /// has at least 4 points.
    pub slope_gap: Option<f64>,
}

pub fn threshold_row(lambda: f64) -> ThresholdRow {
    let log = (1.0 / lambda).ln().powf(1.5);
    let t_new = lambda + lambda * log;
    let t_old = lambda.cbrt() * log;
    ThresholdRow {
        lambda,
        t_new,
        t_old,
        ratio: t_new / t_old,
        leading_ratio: lambda.powf(2.0 / 3.0),
    }
}

/// Evaluates both thresholds on a strictly increasing grid in `(0, 1)`.
pub fn threshold_curves(lambda_grid: &[f64]) -> Result<ThresholdReport> {
    if lambda_grid.iter().any(|&l| !(l > 0.0 && l < 1.0)) || lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "threshold grid must be strictly increasing inside (0, 1)".into(),
        ));
    }
    let rows: Vec<ThresholdRow> = lambda_grid.iter().map(|&l| threshold_row(l)).collect();
    let slope_gap = if rows.len() >= 4 {
        let new: Vec<f64> = rows.iter().map(|r| r.t_new).collect();
        let old: Vec<f64> = rows.iter().map(|r| r.t_old).collect();
        Some(scaling_fit(lambda_grid, &new)?.slope - scaling_fit(lambda_grid, &old)?.slope)
    } else {
        None
    };
    Ok(ThresholdReport {
        ratio_increasing: rows.windows(2).all(|w| w[1].ratio > w[0].ratio),
        ratio_below_one: rows.iter().all(|r| r.ratio < 1.0),
        rows,
        slope_gap,
    })
}
