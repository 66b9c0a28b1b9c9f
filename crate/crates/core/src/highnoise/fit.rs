//! Log-log least-squares fits for `O(λ^k)` scaling checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values at or below this are excluded from the log fit.
pub const FIT_FLOOR: f64 = 1e-300;

/// Least-squares fit of `ln value = slope · ln λ + intercept`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ScalingFit {
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Points used by the fit.
    pub n_points: usize,
    /// Points dropped because the value was not above [`FIT_FLOOR`].
    pub excluded: usize,
}

/// Fits `(λ, value)` pairs; `λ` must be strictly increasing and positive.
pub fn scaling_fit(lambda_grid: &[f64], values: &[f64]) -> Result<ScalingFit> {
    if lambda_grid.len() != values.len() {
        return Err(Error::Length { expected: lambda_grid.len(), got: values.len() });
    }
    if lambda_grid.windows(2).any(|w| w[1] <= w[0]) || lambda_grid.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidParameter(
            "λ grid must be positive and strictly increasing".into(),
        ));
    }
    let points: Vec<(f64, f64)> = lambda_grid
        .iter()
        .zip(values)
        .filter(|(_, &v)| v > FIT_FLOOR && v.is_finite())
        .map(|(&l, &v)| (l.ln(), v.ln()))
        .collect();
    if points.len() < 4 {
        return Err(Error::TooFewPoints { usable: points.len() });
    }
    let count = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / count;
    let my = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(ScalingFit {
        lambda_grid: lambda_grid.to_vec(),
        values: values.to_vec(),
        slope,
        intercept,
        r2,
        n_points: points.len(),
        excluded: values.len() - points.len(),
    })
}

/// Fit summary as written by the command-line scans.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub quantity: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub n_points: usize,
    pub window: [f64; 2],
}

impl FitSummary {
    pub fn new(quantity: &str, fit: &ScalingFit) -> Self {
        let first = fit.lambda_grid.first().copied().unwrap_or(f64::NAN);
        let last = fit.lambda_grid.last().copied().unwrap_or(f64::NAN);
        Self {
            quantity: quantity.to_string(),
            slope: fit.slope,
            intercept: fit.intercept,
            r2: fit.r2,
            n_points: fit.n_points,
            window: [first, last],
        }
    }
}
