//! The coordinate-wise information bound for biased functions.
//!
//! For a function with bias `μ` and level-1 coefficients `z_i`, the sum
//! `Σ_i I(b; Y_i)` equals `Σ_i g_μ(z_i)` where
//!
//! ```text
//! h_μ(z) = ½ H((1 + μ + ρz)/2) + ½ H((1 + μ − ρz)/2),   g_μ(z) = H((1+μ)/2) − h_μ(z).
//! ```
//!
//! In the squared coordinates `w_i = z_i²`, `ψ_μ(w) = g_μ(√w)` is convex and
//! the feasible set is the polytope `{0 ≤ w_i ≤ C², Σ w_i ≤ R²}` with
//! `C = 1 − |μ|`, `R² = 1 − μ²`. Its maximum sits at a vertex, which gives
//! [`extreme_point_bound`]; relaxing the vertex to `K ψ_μ(C²)` with
//! `K = R²/C²` gives [`m_k`], which never exceeds the capacity.

use serde::Serialize;

use crate::cube::NoiseParams;
use crate::error::{Error, Result};
use crate::info::h2;

/// Snap distance when splitting `K` into integer and fractional parts.
const INTEGER_SNAP: f64 = 1e-12;

/// Bias-derived quantities: `K = (1+|μ|)/(1−|μ|)`, `C = 1 − |μ|`, `R² = 1 − μ²`.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct BiasedParams {
    pub mu: f64,
    pub rho: f64,
    pub k: f64,
    pub c: f64,
    pub r2: f64,
}

impl BiasedParams {
    pub fn new(mu: f64, p: &NoiseParams) -> Result<Self> {
        if mu.is_nan() || mu.abs() >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "bias must lie in (-1, 1), got {mu}"
            )));
        }
        let a = mu.abs();
        Ok(Self {
            mu,
            rho: p.rho(),
            k: (1.0 + a) / (1.0 - a),
            c: 1.0 - a,
            r2: 1.0 - mu * mu,
        })
    }
}

/// Squared level-1 coefficients `w_i = z_i²` of a function.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct PolytopePoint {
    pub w: Vec<f64>,
}

impl PolytopePoint {
    pub fn from_level_one(z: &[f64]) -> Self {
        Self { w: z.iter().map(|z| z * z).collect() }
    }

    /// `0 ≤ w_i ≤ C²` and `Σ w_i ≤ R²`, each within `1e-12`.
    pub fn is_feasible(&self, bp: &BiasedParams) -> bool {
        let c2 = bp.c * bp.c;
        self.w.iter().all(|&w| (0.0..=c2 + 1e-12).contains(&w))
            && self.w.iter().sum::<f64>() <= bp.r2 + 1e-12
    }

    /// `Σ_i ψ_μ(w_i)`.
    pub fn objective(&self, bp: &BiasedParams) -> f64 {
        self.w
            .iter()
            .map(|&w| psi_unchecked(w, bp.mu, bp.rho))
            .sum()
    }
}

pub(crate) fn h_mu_unchecked(z: f64, mu: f64, rho: f64) -> f64 {
    0.5 * h2((1.0 + mu + rho * z) / 2.0) + 0.5 * h2((1.0 + mu - rho * z) / 2.0)
}

fn check_feasible(z: f64, mu: f64, rho: f64) -> Result<()> {
    if mu.abs() > 1.0 || mu.abs() + rho * z.abs() > 1.0 + 1e-15 || !z.is_finite() {
        return Err(Error::Infeasible(format!(
            "|μ| + ρ|z| must not exceed 1 (μ = {mu}, ρ = {rho}, z = {z})"
        )));
    }
    Ok(())
}

/// Conditional entropy `H(b | Y_i)` as a function of `z_i`.
pub fn h_mu(z: f64, mu: f64, p: &NoiseParams) -> Result<f64> {
    check_feasible(z, mu, p.rho())?;
    Ok(h_mu_unchecked(z, mu, p.rho()))
}

/// `g_μ(z) = H(b) − h_μ(z)`.
pub fn g_mu(z: f64, mu: f64, p: &NoiseParams) -> Result<f64> {
    Ok(h2((1.0 + mu) / 2.0) - h_mu(z, mu, p)?)
}

/// `ψ_μ(w) = g_μ(√w)`.
pub fn psi_mu(w: f64, mu: f64, p: &NoiseParams) -> Result<f64> {
    if w < 0.0 {
        return Err(Error::Infeasible(format!("ψ_μ needs w >= 0, got {w}")));
    }
    g_mu(w.sqrt(), mu, p)
}

fn psi_unchecked(w: f64, mu: f64, rho: f64) -> f64 {
    h2((1.0 + mu) / 2.0) - h_mu_unchecked(w.sqrt(), mu, rho)
}

fn check_k(k: f64) -> Result<()> {
    if k >= 1.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("K must be finite and >= 1, got {k}")))
    }
}

pub(crate) fn m_k_at(k: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let kp1 = k + 1.0;
    k * h2(k / kp1) - 0.5 * k * h2((k + rho) / kp1) - 0.5 * k * h2((k - rho) / kp1)
}

/// `M_K(ρ) = K H(K/(K+1)) − (K/2) H((K+ρ)/(K+1)) − (K/2) H((K−ρ)/(K+1))`.
pub fn m_k(k: f64, p: &NoiseParams) -> Result<f64> {
    check_k(k)?;
    Ok(m_k_at(k, p.rho()))
}

pub(crate) fn m_k_prime_at(k: f64, rho: f64) -> f64 {
    k / (2.0 * (k + 1.0) * std::f64::consts::LN_2)
        * (((1.0 + rho) * (k + rho)) / ((1.0 - rho) * (k - rho))).ln()
}

/// `dM_K/dρ = K / (2(K+1) ln 2) · ln[(1+ρ)(K+ρ) / ((1−ρ)(K−ρ))]`, for `0 < ρ < 1`.
pub fn m_k_prime(k: f64, p: &NoiseParams) -> Result<f64> {
    check_k(k)?;
    let rho = p.rho();
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "the derivative formula needs 0 < ρ < 1, got {rho}"
        )));
    }
    Ok(m_k_prime_at(k, rho))
}

/// `f(x) = (1/x) ln((1+x)/(1−x))` with `f(0) = 2`.
pub fn series_f(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "f(x) needs 0 <= x < 1, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(2.0);
    }
    Ok(2.0 * x.atanh() / x)
}

/// Truncation `2 Σ_{j < terms} x^{2j} / (2j + 1)` of the power series of [`series_f`].
pub fn series_f_partial(x: f64, terms: usize) -> f64 {
    let x2 = x * x;
    let mut power = 1.0;
    let mut sum = 0.0;
    for j in 0..terms {
        sum += power / (2 * j + 1) as f64;
        power *= x2;
    }
    2.0 * sum
}

/// Maximum of `Σ_i ψ_μ(w_i)` over the vertices of the feasible polytope.
///
/// With `k = ⌊K⌋` and `θ = K − k`: if `n ≥ K` the maximum is
/// `k ψ_μ(C²) + ψ_μ(θ C²)`, otherwise `n ψ_μ(C²)`. Constant functions
/// (`|μ| = 1`) and `ρ = 0` give 0.
pub fn extreme_point_bound(n: usize, mu: f64, p: &NoiseParams) -> Result<f64> {
    if n == 0 {
        return Err(Error::Dimension { n, max: crate::cube::MAX_DIM });
    }
    if mu.is_nan() || mu.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!("bias outside [-1, 1]: {mu}")));
    }
    if mu.abs() == 1.0 || p.rho() == 0.0 {
        return Ok(0.0);
    }
    let bp = BiasedParams::new(mu, p)?;
    let a = mu.abs();
    let c2 = bp.c * bp.c;
    let top = psi_unchecked(c2, a, bp.rho);
    let mut k_int = bp.k.floor();
    let mut theta = bp.k - k_int;
    if theta < INTEGER_SNAP {
        theta = 0.0;
    } else if 1.0 - theta < INTEGER_SNAP {
        k_int += 1.0;
        theta = 0.0;
    }
    if n as f64 >= bp.k || (theta == 0.0 && n as f64 >= k_int) {
        let partial = if theta == 0.0 {
            0.0
        } else {
            psi_unchecked(theta * c2, a, bp.rho)
        };
        Ok(k_int * top + partial)
    } else {
        Ok(n as f64 * top)
    }
}

/// One grid point of the `M_K` comparison.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct CurveRow {
    #[serde(rename = "K")]
    pub k: f64,
    pub rho: f64,
    #[serde(rename = "M_K")]
    pub m_k: f64,
    #[serde(rename = "M_K_prime")]
    pub m_k_prime: f64,
    /// `M_1(ρ) − M_K(ρ)`.
    #[serde(rename = "margin_vs_M1")]
    pub margin_vs_m1: f64,
    /// `M_1'(ρ) − M_K'(ρ)`.
    pub prime_margin: f64,
    /// `|M_K' − centered finite difference of M_K|`.
    pub fd_error: f64,
}

/// Worst margin and where it occurs.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct WorstMargin {
    pub margin: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub rho: f64,
}

/// Result of checking `M_K' ≤ M_1'` and `M_K ≤ M_1` on a grid.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ChainReport {
    pub rows: Vec<CurveRow>,
    pub worst_value_margin: WorstMargin,
    pub worst_prime_margin: WorstMargin,
    pub max_fd_error: f64,
    /// Both inequalities hold at every grid point within `tolerance`.
    pub holds: bool,
    pub tolerance: f64,
}

/// Step of the centered finite difference used to cross-check [`m_k_prime`].
pub const FD_STEP: f64 = 1e-5;

/// Evaluates `M_K`, `M_K'` and their margins against `K = 1` on a grid.
pub fn verify_bound_chain(k_grid: &[f64], rho_grid: &[f64]) -> Result<ChainReport> {
    for &k in k_grid {
        check_k(k)?;
    }
    if let Some(&rho) = rho_grid.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidParameter(format!(
            "ρ grid must lie in (0, 1), found {rho}"
        )));
    }
    let tolerance = 1e-12;
    let mut rows = Vec::with_capacity(k_grid.len() * rho_grid.len());
    for &k in k_grid {
        for &rho in rho_grid {
            let mk = m_k_at(k, rho);
            let mkp = m_k_prime_at(k, rho);
            let h = FD_STEP.min((1.0 - rho) / 2.0).min(rho / 2.0);
            let fd = (m_k_at(k, rho + h) - m_k_at(k, rho - h)) / (2.0 * h);
            rows.push(CurveRow {
                k,
                rho,
                m_k: mk,
                m_k_prime: mkp,
                margin_vs_m1: m_k_at(1.0, rho) - mk,
                prime_margin: m_k_prime_at(1.0, rho) - mkp,
                fd_error: (mkp - fd).abs(),
            });
        }
    }
    let worst = |key: fn(&CurveRow) -> f64| {
        rows.iter()
            .map(|r| WorstMargin { margin: key(r), k: r.k, rho: r.rho })
            .fold(None::<WorstMargin>, |acc, w| match acc {
                Some(a) if a.margin <= w.margin => Some(a),
                _ => Some(w),
            })
            .unwrap_or(WorstMargin { margin: 0.0, k: f64::NAN, rho: f64::NAN })
    };
    let worst_value_margin = worst(|r| r.margin_vs_m1);
    let worst_prime_margin = worst(|r| r.prime_margin);
    let max_fd_error = rows.iter().map(|r| r.fd_error).fold(0.0, f64::max);
    Ok(ChainReport {
        holds: worst_value_margin.margin >= -tolerance && worst_prime_margin.margin >= -tolerance,
        rows,
        worst_value_margin,
        worst_prime_margin,
        max_fd_error,
        tolerance,
    })
}
