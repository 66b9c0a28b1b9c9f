//! `L^q` norms and homogeneous Fourier parts.

use crate::cube::RealFunction;
use crate::error::{Error, Result};
use crate::transform::{inverse_wht, wht};

/// `‖f‖_q = (E|f|^q)^{1/q}` for `q ≥ 1`.
pub fn lq_norm(f: &RealFunction, q: f64) -> Result<f64> {
    if !(q >= 1.0 && q.is_finite()) {
        return Err(Error::InvalidParameter(format!("norm exponent must be >= 1, got {q}")));
    }
    Ok(f.expect(|v| v.abs().powf(q)).powf(1.0 / q))
}

/// The degree-`k` homogeneous part `Σ_{|S| = k} f̂(S) χ_S`.
pub fn fourier_level_part(f: &RealFunction, k: usize) -> RealFunction {
    let s = wht(f).restrict_levels(|level| level == k);
    inverse_wht(&s)
}

/// `(√(q−1))^k ‖h‖_2 − ‖h‖_q`; nonnegative for every degree-`k` homogeneous `h`.
pub fn hypercontractive_margin(h: &RealFunction, k: usize, q: f64) -> Result<f64> {
    let scale = (q - 1.0).sqrt().powi(k as i32);
    Ok(scale * lq_norm(h, 2.0)? - lq_norm(h, q)?)
}
