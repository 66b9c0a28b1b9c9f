//! The noise operator `T_α` of the binary symmetric channel.

use crate::cube::{NoiseParams, RealFunction};
use crate::error::{Error, Result};
use crate::transform::{butterfly, inverse_wht, wht, FourierSpectrum};

/// Largest dimension accepted by the `O(4^n)` direct evaluation.
pub const DIRECT_MAX_DIM: usize = 12;

/// Values in `[-NEG_CLAMP, 0)` produced from a nonnegative input are set to 0.
const NEG_CLAMP: f64 = 1e-15;

/// `ρ^k` for `k = 0..=n`, with `0^0 = 1`.
pub(crate) fn rho_powers(n: usize, rho: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        out.push(acc);
        acc *= rho;
    }
    out
}

/// Applies the Fourier multiplier `ρ^{|S|}` to a spectrum.
pub fn noise_spectrum(s: &FourierSpectrum, p: &NoiseParams) -> FourierSpectrum {
    let powers = rho_powers(s.n(), p.rho());
    s.scale_by_level(|k| powers[k])
}

/// `T_α f` via the Walsh–Hadamard transform.
///
/// When `f` is pointwise nonnegative, round-off negatives down to `-1e-15`
/// are clamped to zero so that logarithms downstream stay defined.
pub fn apply_noise(f: &RealFunction, p: &NoiseParams) -> RealFunction {
    let nonneg = f.min() >= 0.0;
    let out = inverse_wht(&noise_spectrum(&wht(f), p));
    if nonneg {
        out.map(|v| if (-NEG_CLAMP..0.0).contains(&v) { 0.0 } else { v })
    } else {
        out
    }
}

/// `T_α f` via the same butterfly, with the multipliers applied in place.
/// Avoids the intermediate spectrum allocation in hot loops.
pub(crate) fn apply_noise_values(values: &mut [f64], n: usize, rho: f64) {
    let powers = rho_powers(n, rho);
    butterfly(values);
    let scale = 1.0 / values.len() as f64;
    for (s, v) in values.iter_mut().enumerate() {
        *v *= powers[s.count_ones() as usize] * scale;
    }
    butterfly(values);
}

/// `(T_α f)(x) = Σ_y α^{d(x,y)} (1-α)^{n-d(x,y)} f(y)`, evaluated directly.
pub fn apply_noise_direct(f: &RealFunction, p: &NoiseParams) -> Result<RealFunction> {
    let n = f.n();
    if n > DIRECT_MAX_DIM {
        return Err(Error::ResourceGuard(format!(
            "direct noise evaluation is O(4^n); n = {n} exceeds {DIRECT_MAX_DIM}"
        )));
    }
    let alpha = p.alpha();
    let weights: Vec<f64> = (0..=n)
        .map(|d| alpha.powi(d as i32) * (1.0 - alpha).powi((n - d) as i32))
        .collect();
    let values = f.values();
    let out = (0..values.len())
        .map(|x| {
            values
                .iter()
                .enumerate()
                .map(|(y, &fy)| weights[(x ^ y).count_ones() as usize] * fy)
                .sum()
        })
        .collect();
    RealFunction::new(n, out)
}
