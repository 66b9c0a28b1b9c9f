//! High-noise analysis of `Ent(T_α f)` for a density `f`.
//!
//! With `f_0`, `f_1` the even and odd parts of `f`, the noisy parts are
//! `F = T_α f_0`, `Z = T_α f_1` and `V = F − 1`, so `T_α f = F + Z`.
//! For `λ = ρ²` small, `Ent(T_α f) ≈ Ent(F) + E[Z²/F] / (2 ln 2)` and the
//! leading term is `λ L_1(f) / (2 ln 2)`.

mod concentration;
mod curves;
mod family;
mod fit;
mod hyper;

pub use concentration::{concentration_report, ConcentrationRow};
pub use curves::{threshold_curves, ThresholdReport, ThresholdRow};
pub use family::{
    named_density, normalized_indicator, random_density, standard_family, tribes6,
    FAMILY_NAMES, RANDOM_SUP_BOUND,
};
pub use fit::{scaling_fit, FitSummary, ScalingFit, FIT_FLOOR};
pub use hyper::{fourier_level_part, hypercontractive_margin, lq_norm};

use serde::Serialize;

use crate::cube::{mean_of, NoiseParams, RealFunction};
use crate::error::{Error, Result};
use crate::info::{capacity, ent_unchecked, PROB_TOL};
use crate::noise::rho_powers;
use crate::transform::{inverse_wht, wht, FourierSpectrum};

use std::f64::consts::LN_2;

/// `F` values at or below this make `Z²/F` and `Z⁴/F³` contribute 0.
pub const RATIO_FLOOR: f64 = 1e-14;

/// Tolerance on `E[f] = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// `f_0(x) = (f(x) + f(−x))/2` and `f_1(x) = (f(x) − f(−x))/2`.
#[derive(Clone, PartialEq, Debug)]
pub struct EvenOddSplit {
    pub f0: RealFunction,
    pub f1: RealFunction,
}

pub fn split_even_odd(f: &RealFunction) -> EvenOddSplit {
    let r = f.reflected();
    EvenOddSplit {
        f0: f.zip_with(&r, |a, b| (a + b) / 2.0).expect("same cube"),
        f1: f.zip_with(&r, |a, b| (a - b) / 2.0).expect("same cube"),
    }
}

/// `F = T_α f_0`, `V = F − 1`, `Z = T_α f_1`.
#[derive(Clone, PartialEq, Debug)]
pub struct NoisyTriple {
    pub f: RealFunction,
    pub v: RealFunction,
    pub z: RealFunction,
    pub params: NoiseParams,
    /// Fourier spectrum of the input density.
    pub spectrum: FourierSpectrum,
}

fn check_density(f: &RealFunction) -> Result<()> {
    if let Some((index, &value)) = f.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
        return Err(Error::Negative { index, value });
    }
    let mean = f.mean();
    if (mean - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(mean));
    }
    Ok(())
}

pub fn noisy_triple(f: &RealFunction, p: &NoiseParams) -> Result<NoisyTriple> {
    check_density(f)?;
    let n = f.n();
    let spectrum = wht(f);
    let powers = rho_powers(n, p.rho());
    let part = |odd: bool| {
        let coeffs = spectrum
            .coeffs()
            .iter()
            .enumerate()
            .map(|(s, &c)| {
                let k = s.count_ones() as usize;
                if (k % 2 == 1) == odd {
                    c * powers[k]
                } else {
                    0.0
                }
            })
            .collect();
        inverse_wht(&FourierSpectrum::from_raw(n, coeffs))
    };
    let big_f = part(false);
    let z = part(true);
    Ok(NoisyTriple {
        v: big_f.map(|x| x - 1.0),
        f: big_f,
        z,
        params: *p,
        spectrum,
    })
}

impl NoisyTriple {
    /// `min F` and `max(|Z| − F)`; dominance means `≥ −1e-14` and `≤ 1e-14`.
    pub fn dominance_margins(&self) -> (f64, f64) {
        let excess = self
            .f
            .values()
            .iter()
            .zip(self.z.values())
            .map(|(&f, &z)| z.abs() - f)
            .fold(f64::NEG_INFINITY, f64::max);
        (self.f.min(), excess)
    }

    /// `T_α f = F + Z`, with round-off negatives clamped to 0.
    pub fn noisy(&self) -> Vec<f64> {
        self.f
            .values()
            .iter()
            .zip(self.z.values())
            .map(|(&f, &z)| {
                let v = f + z;
                if (-PROB_TOL..0.0).contains(&v) {
                    0.0
                } else {
                    v
                }
            })
            .collect()
    }
}

/// Moments of `V` and `Z` under the uniform measure.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct MomentReport {
    pub ev2: f64,
    pub ev3abs: f64,
    pub ez2: f64,
    pub ez4: f64,
    pub ez2v: f64,
    pub ez2_over_f: f64,
    pub ez4_over_f3: f64,
    /// Level-1 weight of the input density.
    pub l1: f64,
    /// `E[Z²] − E[Z² V]`, the first-order part of `E[Z²/F]`.
    pub taylor_main: f64,
    /// `E[Z² V² / F]`, the remainder part of `E[Z²/F]`.
    pub taylor_remainder: f64,
}

fn mean_map(t: &NoisyTriple, g: impl Fn(f64, f64, f64) -> f64) -> f64 {
    let terms: Vec<f64> = t
        .f
        .values()
        .iter()
        .zip(t.v.values())
        .zip(t.z.values())
        .map(|((&f, &v), &z)| g(f, v, z))
        .collect();
    mean_of(&terms)
}

pub fn moments(t: &NoisyTriple) -> MomentReport {
    let ratio = |f: f64, num: f64, power: i32| if f <= RATIO_FLOOR { 0.0 } else { num / f.powi(power) };
    let ez2 = mean_map(t, |_, _, z| z * z);
    let ez2v = mean_map(t, |_, v, z| z * z * v);
    MomentReport {
        ev2: mean_map(t, |_, v, _| v * v),
        ev3abs: mean_map(t, |_, v, _| v.abs().powi(3)),
        ez2,
        ez4: mean_map(t, |_, _, z| z.powi(4)),
        ez2v,
        ez2_over_f: mean_map(t, |f, _, z| ratio(f, z * z, 1)),
        ez4_over_f3: mean_map(t, |f, _, z| ratio(f, z.powi(4), 3)),
        l1: t.spectrum.level_weight(1),
        taylor_main: ez2 - ez2v,
        taylor_remainder: mean_map(t, |f, v, z| ratio(f, z * z * v * v, 1)),
    }
}

/// `Ent(T_α f) − Ent(F) − E[Z²/F]/(2 ln 2)` next to `E[Z⁴/F³]`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct DecompositionGap {
    pub gap: f64,
    pub bound_term: f64,
}

impl DecompositionGap {
    /// `gap / bound_term`, or `None` when the bound term vanishes.
    pub fn ratio(&self) -> Option<f64> {
        (self.bound_term > 0.0).then(|| self.gap / self.bound_term)
    }
}

fn ent_of(values: &[f64]) -> f64 {
    ent_unchecked(values, mean_of(values))
}

pub fn entropy_decomposition_gap(f: &RealFunction, p: &NoiseParams) -> Result<DecompositionGap> {
    let t = noisy_triple(f, p)?;
    let m = moments(&t);
    let gap = ent_of(&t.noisy()) - ent_of(t.f.values()) - m.ez2_over_f / (2.0 * LN_2);
    Ok(DecompositionGap { gap, bound_term: m.ez4_over_f3 })
}

/// `Ent(T_α f) − λ L_1(f) / (2 ln 2)`.
pub fn entropy_expansion_residual(f: &RealFunction, p: &NoiseParams) -> Result<f64> {
    let t = noisy_triple(f, p)?;
    Ok(ent_of(&t.noisy()) - p.lambda() * t.spectrum.level_weight(1) / (2.0 * LN_2))
}

/// `Ent(F)` for the even part of the noisy density.
pub fn even_part_entropy(f: &RealFunction, p: &NoiseParams) -> Result<f64> {
    Ok(ent_of(noisy_triple(f, p)?.f.values()))
}

/// `|(1 − H(α)) − λ/(2 ln 2) − λ²/(12 ln 2)|`.
pub fn capacity_expansion_residual(p: &NoiseParams) -> f64 {
    let l = p.lambda();
    (capacity(p) - l / (2.0 * LN_2) - l * l / (12.0 * LN_2)).abs()
}

/// Fits [`capacity_expansion_residual`] against `λ` over `λ ∈ (0, 0.2]`.
pub fn capacity_expansion_check(lambda_grid: &[f64]) -> Result<ScalingFit> {
    if let Some(&l) = lambda_grid.iter().find(|&&l| !(l > 0.0 && l <= 0.2)) {
        return Err(Error::InvalidParameter(format!(
            "capacity expansion grid must lie in (0, 0.2], found {l}"
        )));
    }
    let params = lambda_grid
        .iter()
        .map(|&l| NoiseParams::from_lambda(l))
        .collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = params.iter().map(NoiseParams::lambda).collect();
    let values: Vec<f64> = params.iter().map(capacity_expansion_residual).collect();
    scaling_fit(&lambdas, &values)
}

/// One named quantity evaluated over a `λ` grid.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ScanSeries {
    pub quantity: String,
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// Quantities reported by [`scan_density`].
pub const SCAN_QUANTITIES: [&str; 12] = [
    "ev2",
    "ev3abs",
    "ez2",
    "ez4",
    "ez2v",
    "ez2_over_f",
    "ez4_over_f3",
    "ez2_minus_lambda_l1",
    "ent_f",
    "ent_tf",
    "residual",
    "gap",
];

/// Evaluates moments, entropies, the expansion residual and the
/// decomposition gap of a density at each `λ` of the grid.
///
/// The reported `λ` values are `ρ²` for the channel actually used, which can
/// differ from the requested ones in the last bit.
pub fn scan_density(f: &RealFunction, lambda_grid: &[f64]) -> Result<Vec<ScanSeries>> {
    use rayon::prelude::*;
    let params = lambda_grid
        .iter()
        .map(|&l| NoiseParams::from_lambda(l))
        .collect::<Result<Vec<_>>>()?;
    let rows = params
        .par_iter()
        .map(|p| {
            let t = noisy_triple(f, p)?;
            let m = moments(&t);
            let ent_tf = ent_of(&t.noisy());
            let ent_f = ent_of(t.f.values());
            let lambda = p.lambda();
            Ok([
                m.ev2,
                m.ev3abs,
                m.ez2,
                m.ez4,
                m.ez2v,
                m.ez2_over_f,
                m.ez4_over_f3,
                m.ez2 - lambda * m.l1,
                ent_f,
                ent_tf,
                ent_tf - lambda * m.l1 / (2.0 * LN_2),
                ent_tf - ent_f - m.ez2_over_f / (2.0 * LN_2),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let lambdas: Vec<f64> = params.iter().map(NoiseParams::lambda).collect();
    Ok(SCAN_QUANTITIES
        .iter()
        .enumerate()
        .map(|(q, name)| ScanSeries {
            quantity: name.to_string(),
            lambda_grid: lambdas.clone(),
            values: rows.iter().map(|r| r[q]).collect(),
        })
        .collect())
}
