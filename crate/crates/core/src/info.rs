//! Entropies, the entropy functional, and exact mutual information between a
//! Boolean function of a uniform input and the BSC output.
//!
//! All information quantities are in bits and use `0 log 0 = 0`.

use serde::{Deserialize, Serialize};

use crate::bound::h_mu_unchecked;
use crate::cube::{check_coord, mean_of, BooleanFunction, NoiseParams, RealFunction};
use crate::error::{Error, Result};
use crate::noise::apply_noise_values;

/// Probabilities within this distance of `[0, 1]` are clamped into it.
pub const PROB_TOL: f64 = 1e-15;

/// A probability in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if !(-PROB_TOL..=1.0 + PROB_TOL).contains(&p) {
            return Err(Error::Probability(p));
        }
        Ok(Self(p.clamp(0.0, 1.0)))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Binary entropy without range checks; the argument is clamped.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: Probability) -> f64 {
    h2(p.get())
}

/// Capacity `1 - H(α)` of the BSC.
///
/// Evaluated as `1 - [H((1+ρ)/2) + H((1-ρ)/2)]/2`, the same arithmetic path
/// as the single-coordinate information of a dictator.
pub fn capacity(p: &NoiseParams) -> f64 {
    let rho = p.rho();
    1.0 - (0.5 * h2((1.0 + rho) / 2.0) + 0.5 * h2((1.0 - rho) / 2.0))
}

/// `t ln t - t + 1`, nonnegative with a double zero at `t = 1`.
#[inline]
fn phi(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else {
        let u = t - 1.0;
        (1.0 + u) * u.ln_1p() - u
    }
}

/// `Ent(g) = E[g log2 g] - E[g] log2 E[g]` for nonnegative `g`.
///
/// Computed as `E[g] · E[φ(g / E[g])] / ln 2` with `φ(t) = t ln t - t + 1`,
/// which keeps every summand nonnegative.
pub fn ent_functional(g: &RealFunction) -> Result<f64> {
    if let Some((index, &value)) = g.values().iter().enumerate().find(|(_, v)| **v < -PROB_TOL) {
        return Err(Error::Negative { index, value });
    }
    let mean = g.mean();
    if mean <= 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(ent_unchecked(g.values(), mean))
}

pub(crate) fn ent_unchecked(values: &[f64], mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let terms: Vec<f64> = values.iter().map(|&v| phi(v.max(0.0) / mean)).collect();
    mean * mean_of(&terms) / std::f64::consts::LN_2
}

/// `T_α` applied to the indicator of `{b = +1}`: the posterior `P(b = 1 | Y = y)`.
pub fn posterior(b: &BooleanFunction, p: &NoiseParams) -> RealFunction {
    let mut values = b.indicator().into_values();
    apply_noise_values(&mut values, b.n(), p.rho());
    for v in values.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    RealFunction::new(b.n(), values).expect("noise of a finite table is finite")
}

/// Both evaluation routes of `I(b(X); Y)`:
/// `(H(b) - E_Y[H(P(b=1|Y))], Ent(T_α f) + Ent(T_α(1 - f)))` with `f = (1+b)/2`.
pub fn mutual_information_routes(b: &BooleanFunction, p: &NoiseParams) -> (f64, f64) {
    let post = posterior(b, p);
    let hb = h2((1.0 + b.bias()) / 2.0);
    let cond: Vec<f64> = post.values().iter().map(|&q| h2(q)).collect();
    let conditional = hb - mean_of(&cond);

    let complement: Vec<f64> = post.values().iter().map(|&q| 1.0 - q).collect();
    let m1 = post.mean();
    let m0 = mean_of(&complement);
    let ent = ent_unchecked(post.values(), m1) + ent_unchecked(&complement, m0);
    (conditional, ent)
}

/// `I(b(X); Y)` in bits, via the posterior `T_α f`.
pub fn mutual_information(b: &BooleanFunction, p: &NoiseParams) -> f64 {
    mutual_information_routes(b, p).0
}

/// `I(b(X); Y_i) = H(b) - h_μ(z_i)` for a single noisy coordinate (1-based).
pub fn coordinate_mi(b: &BooleanFunction, i: usize, p: &NoiseParams) -> Result<f64> {
    check_coord(i, b.n())?;
    let mu = b.bias();
    let z = b.level_one_coeff(i)?;
    Ok(h2((1.0 + mu) / 2.0) - h_mu_unchecked(z, mu, p.rho()))
}

/// Bias, level-1 coefficients and mutual information of one function.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct MIReport {
    pub n: usize,
    pub alpha: f64,
    pub mu: f64,
    /// `I(b(X); Y)`.
    pub total_mi: f64,
    /// `Σ_i I(b(X); Y_i)`.
    pub sum_coord_mi: f64,
    pub coord_mi: Vec<f64>,
    pub z: Vec<f64>,
}

/// Per-coordinate informations and their sum `L(b) = Σ_i I(b; Y_i)`.
pub fn sum_coordinate_mi(b: &BooleanFunction, p: &NoiseParams) -> MIReport {
    let mu = b.bias();
    let z = b.level_one();
    let hb = h2((1.0 + mu) / 2.0);
    let coord_mi: Vec<f64> = z
        .iter()
        .map(|&zi| hb - h_mu_unchecked(zi, mu, p.rho()))
        .collect();
    MIReport {
        n: b.n(),
        alpha: p.alpha(),
        mu,
        total_mi: mutual_information(b, p),
        sum_coord_mi: coord_mi.iter().sum(),
        coord_mi,
        z,
    }
}

/// Just `Σ_i I(b; Y_i)`, skipping the full-channel term.
pub fn coordinate_sum(b: &BooleanFunction, p: &NoiseParams) -> f64 {
    let mu = b.bias();
    let hb = h2((1.0 + mu) / 2.0);
    b.level_one()
        .into_iter()
        .map(|zi| hb - h_mu_unchecked(zi, mu, p.rho()))
        .sum()
}

/// Brute-force joint-distribution evaluations, kept as independent oracles.
pub mod oracle {
    use super::*;

    /// Largest dimension for the `O(4^n)` joint table.
    pub const JOINT_MAX_DIM: usize = 10;

    fn mi_from_joint(joint: &[[f64; 2]]) -> f64 {
        let pb = [
            joint.iter().map(|r| r[0]).sum::<f64>(),
            joint.iter().map(|r| r[1]).sum::<f64>(),
        ];
        joint
            .iter()
            .map(|row| {
                let py = row[0] + row[1];
                row.iter()
                    .zip(pb)
                    .filter(|(&pj, _)| pj > 0.0)
                    .map(|(&pj, pbj)| pj * (pj / (pbj * py)).log2())
                    .sum::<f64>()
            })
            .sum()
    }

    /// `I(b(X); Y)` from the full `(b, y)` joint table.
    pub fn joint_table_mi(b: &BooleanFunction, p: &NoiseParams) -> Result<f64> {
        let n = b.n();
        if n > JOINT_MAX_DIM {
            return Err(Error::ResourceGuard(format!(
                "joint-table oracle is O(4^n); n = {n} exceeds {JOINT_MAX_DIM}"
            )));
        }
        let a = p.alpha();
        let flip: Vec<f64> = (0..=n)
            .map(|d| a.powi(d as i32) * (1.0 - a).powi((n - d) as i32))
            .collect();
        let px = 1.0 / b.len() as f64;
        let joint: Vec<[f64; 2]> = (0..b.len())
            .map(|y| {
                let mut row = [0.0; 2];
                for x in 0..b.len() {
                    let idx = usize::from(b.is_plus(x));
                    row[idx] += px * flip[(x ^ y).count_ones() as usize];
                }
                row
            })
            .collect();
        Ok(mi_from_joint(&joint))
    }

    /// `I(b(X); Y_i)` from the `2 × 2` joint table of `(b, Y_i)`.
    pub fn joint_table_coordinate_mi(
        b: &BooleanFunction,
        i: usize,
        p: &NoiseParams,
    ) -> Result<f64> {
        check_coord(i, b.n())?;
        let a = p.alpha();
        let px = 1.0 / b.len() as f64;
        let mut joint = vec![[0.0; 2]; 2];
        for x in 0..b.len() {
            let xi = (x >> (i - 1)) & 1;
            let idx = usize::from(b.is_plus(x));
            for (yi, row) in joint.iter_mut().enumerate() {
                row[idx] += px * if xi == yi { 1.0 - a } else { a };
            }
        }
        Ok(mi_from_joint(&joint))
    }
}
