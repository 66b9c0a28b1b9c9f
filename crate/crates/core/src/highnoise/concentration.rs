//! Fourier tail weight of near-maximizers of `I(b(X); Y)`.

use serde::Serialize;

use crate::cube::NoiseParams;
use crate::error::{Error, Result};
use crate::info::{capacity, mutual_information};
use crate::io::table_string;
use crate::search::enumerate_canonical;
use crate::transform::wht;

/// One orbit whose information is at least `τ · (1 − H(α))`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ConcentrationRow {
    pub class: String,
    pub orbit_size: u64,
    pub mu: f64,
    pub mi: f64,
    /// `ξ = Σ_{|S| ≥ 2} b̂(S)²`.
    pub xi: f64,
    /// `ξ / λ`; absent when `λ = 0`.
    pub xi_over_lambda: Option<f64>,
}

/// Every orbit on `n ≤ 4` variables with `I ≥ τ · capacity − 1e-10`, in key order.
pub fn concentration_report(n: usize, p: &NoiseParams, tau: f64) -> Result<Vec<ConcentrationRow>> {
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidParameter(format!("τ must lie in (0, 1], got {tau}")));
    }
    let threshold = tau * capacity(p) - 1e-10;
    let lambda = p.lambda();
    let mut rows = Vec::new();
    for class in enumerate_canonical(n, false)? {
        let b = &class.representative;
        let mi = mutual_information(b, p);
        if mi < threshold {
            continue;
        }
        let spectrum = wht(&b.to_real());
        let xi: f64 = (2..=n).map(|k| spectrum.level_weight(k)).sum();
        rows.push(ConcentrationRow {
            class: table_string(b),
            orbit_size: class.orbit_size,
            mu: b.bias(),
            mi,
            xi,
            xi_over_lambda: (lambda > 0.0).then(|| xi / lambda),
        });
    }
    Ok(rows)
}
