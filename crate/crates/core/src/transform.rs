//! Walsh–Hadamard transform with expectation normalization.

use crate::cube::{check_dim, RealFunction};
use crate::error::{Error, Result};

/// In-place unnormalized Hadamard butterfly: `data[S] ← Σ_m data[m] (-1)^{|m ∧ S|}`.
pub(crate) fn butterfly(data: &mut [f64]) {
    debug_assert!(data.len().is_power_of_two());
    let mut half = 1;
    while half < data.len() {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half <<= 1;
    }
}

/// Fourier coefficients `f̂(S) = E[f(X) Π_S(X)]`, indexed by subset mask.
#[derive(Clone, PartialEq, Debug)]
pub struct FourierSpectrum {
    n: usize,
    coeffs: Vec<f64>,
}

impl FourierSpectrum {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::Length {
                expected: 1 << n,
                got: coeffs.len(),
            });
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { n, coeffs })
    }

    pub(crate) fn from_raw(n: usize, coeffs: Vec<f64>) -> Self {
        Self { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    /// The empty-set coefficient, i.e. the mean.
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `W_k = Σ_{|S| = k} f̂(S)^2`; zero for `k > n`.
    pub fn level_weight(&self, k: usize) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(s, _)| s.count_ones() as usize == k)
            .map(|(_, c)| c * c)
            .sum()
    }

    /// All level weights `W_0, ..., W_n`.
    pub fn level_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.n + 1];
        for (s, c) in self.coeffs.iter().enumerate() {
            w[s.count_ones() as usize] += c * c;
        }
        w
    }

    /// `Σ_S f̂(S)^2`, which equals `E[f^2]` by Parseval.
    pub fn total_weight(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Multiplies each coefficient by `g(|S|)`.
    pub fn scale_by_level(&self, g: impl Fn(usize) -> f64) -> Self {
        let factors: Vec<f64> = (0..=self.n).map(&g).collect();
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(s, c)| c * factors[s.count_ones() as usize])
                .collect(),
        }
    }

    /// Keeps only the coefficients with `keep(|S|)`.
    pub fn restrict_levels(&self, keep: impl Fn(usize) -> bool) -> Self {
        self.scale_by_level(|k| if keep(k) { 1.0 } else { 0.0 })
    }
}

/// Forward transform, `O(N log N)`.
pub fn wht(f: &RealFunction) -> FourierSpectrum {
    let mut data = f.values().to_vec();
    butterfly(&mut data);
    let scale = 1.0 / data.len() as f64;
    data.iter_mut().for_each(|c| *c *= scale);
    FourierSpectrum::from_raw(f.n(), data)
}

/// Inverse transform: `f(x) = Σ_S f̂(S) Π_S(x)`.
pub fn inverse_wht(s: &FourierSpectrum) -> RealFunction {
    let mut data = s.coeffs.clone();
    butterfly(&mut data);
    RealFunction::from_raw(s.n, data)
}

/// Level weight of a spectrum; see [`FourierSpectrum::level_weight`].
pub fn level_weight(s: &FourierSpectrum, k: usize) -> f64 {
    s.level_weight(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::BooleanFunction;

    // Direct O(4^n) summation of E[f Π_S].
    fn naive(f: &RealFunction) -> Vec<f64> {
        let len = f.len();
        (0..len)
            .map(|s| {
                (0..len)
                    .map(|m| {
                        let sign = if (m & s).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                        f.values()[m] * sign
                    })
                    .sum::<f64>()
                    / len as f64
            })
            .collect()
    }

    #[test]
    fn dictator_and_constant() {
        let d = wht(&BooleanFunction::dictator(2, 1).unwrap().to_real());
        assert_eq!(d.coeffs(), &[0.0, 1.0, 0.0, 0.0]);
        let c = wht(&RealFunction::constant(3, 1.0).unwrap());
        assert_eq!(c.coeff(0), 1.0);
        assert!(c.coeffs()[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn and_like_function() {
        // +1 only at (+1, +1): frozen from the 4-point direct summation.
        let b = BooleanFunction::from_index_fn(2, |m| m == 0).unwrap();
        let s = wht(&b.to_real());
        assert_eq!(naive(&b.to_real()), vec![-0.5, 0.5, 0.5, 0.5]);
        assert_eq!(s.coeffs(), &[-0.5, 0.5, 0.5, 0.5]);
        assert_eq!(s.level_weight(1), 0.5);
    }

    #[test]
    fn matches_naive_sum() {
        let f = RealFunction::new(4, (0..16).map(|i| ((i * 7) % 5) as f64 - 1.5).collect())
            .unwrap();
        let fast = wht(&f);
        for (a, b) in fast.coeffs().iter().zip(naive(&f)) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn single_term_inverse() {
        let s = FourierSpectrum::new(1, vec![0.0, 0.5]).unwrap();
        assert_eq!(inverse_wht(&s).values(), &[0.5, -0.5]);
        let one = FourierSpectrum::new(2, vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(inverse_wht(&one).values(), &[1.0; 4]);
    }

    #[test]
    fn parity_levels() {
        let s = wht(&BooleanFunction::parity(4).unwrap().to_real());
        let w = s.level_weights();
        assert_eq!(w, vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(level_weight(&s, 4), 1.0);
        assert_eq!(s.level_weight(7), 0.0);
    }
}
