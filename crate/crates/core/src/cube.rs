//! Functions on the hypercube `{-1, 1}^n`.
//!
//! Points are addressed by an index `m` in `0..2^n`. Bit `i` of `m` encodes
//! coordinate `x_{i+1}` as `(-1)^bit`, so index 0 is the all-`+1` vertex and a
//! subset `S ⊆ [n]` doubles as a bit mask over the same positions.

use crate::error::{Error, Result};

/// Largest dimension supported by the dense representations.
pub const MAX_DIM: usize = 20;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::Dimension { n, max: MAX_DIM })
    }
}

pub(crate) fn check_coord(coord: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&coord) {
        Ok(())
    } else {
        Err(Error::Coordinate { coord, n })
    }
}

/// Coordinates of the point with the given index.
pub fn point_vector(index: usize, n: usize) -> Result<Vec<i8>> {
    check_dim(n)?;
    if index >= 1 << n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok((0..n)
        .map(|i| if (index >> i) & 1 == 0 { 1 } else { -1 })
        .collect())
}

/// Inverse of [`point_vector`].
pub fn point_index(x: &[i8]) -> Result<usize> {
    check_dim(x.len())?;
    x.iter().enumerate().try_fold(0usize, |acc, (i, &v)| match v {
        1 => Ok(acc),
        -1 => Ok(acc | 1 << i),
        _ => Err(Error::InvalidParameter(format!(
            "coordinate {} has value {v}, expected ±1",
            i + 1
        ))),
    })
}

/// Pairwise (cascade) summation. Deterministic and exact for the symmetric
/// value patterns produced by dictators.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        len => {
            let (lo, hi) = values.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

pub(crate) fn mean_of(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}

/// Masks selecting, inside one 64-bit word, the indices whose bit `i` is 0.
pub(crate) const PLUS_HALF: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// A `±1`-valued function on `{-1, 1}^n`, stored as a packed truth table.
///
/// Bit `m` of the table is 1 when the function takes the value `+1` at point
/// `m`. Unused high bits of the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BooleanFunction {
    n: usize,
    words: Vec<u64>,
}

impl BooleanFunction {
    fn zeroed(n: usize) -> Result<Self> {
        check_dim(n)?;
        let words = vec![0; (1usize << n).div_ceil(64)];
        Ok(Self { n, words })
    }

    fn tail_mask(&self) -> u64 {
        let len = self.len();
        if len >= 64 {
            u64::MAX
        } else {
            (1u64 << len) - 1
        }
    }

    /// Constant function with value `+1` when `plus` is true, `-1` otherwise.
    pub fn constant(n: usize, plus: bool) -> Result<Self> {
        let mut f = Self::zeroed(n)?;
        if plus {
            f.words.iter_mut().for_each(|w| *w = u64::MAX);
            let mask = f.tail_mask();
            f.words[0] &= mask;
        }
        Ok(f)
    }

    /// Builds a function from a predicate on point indices (`true` ↦ `+1`).
    pub fn from_index_fn(n: usize, mut plus: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut f = Self::zeroed(n)?;
        for m in 0..f.len() {
            if plus(m) {
                f.words[m / 64] |= 1 << (m % 64);
            }
        }
        Ok(f)
    }

    /// Builds a function from its `±1` point values.
    pub fn from_values(n: usize, values: &[i8]) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::Length {
                expected: 1 << n,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::InvalidParameter(format!(
                "value {} at index {i} is not ±1",
                values[i]
            )));
        }
        Self::from_index_fn(n, |m| values[m] == 1)
    }

    /// Builds a function on at most 6 variables from a packed table.
    pub fn from_bits(n: usize, table: u64) -> Result<Self> {
        if n > 6 {
            return Err(Error::InvalidParameter(format!(
                "packed u64 tables hold at most 6 variables, got {n}"
            )));
        }
        let mut f = Self::zeroed(n)?;
        f.words[0] = table & f.tail_mask();
        Ok(f)
    }

    /// The packed table, when it fits into one word.
    pub fn to_bits(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    /// The dictator `x_i` (1-based).
    pub fn dictator(n: usize, i: usize) -> Result<Self> {
        check_coord(i, n)?;
        Self::from_index_fn(n, |m| (m >> (i - 1)) & 1 == 0)
    }

    /// Parity `x_1 x_2 ... x_n`.
    pub fn parity(n: usize) -> Result<Self> {
        Self::from_index_fn(n, |m| m.count_ones() % 2 == 0)
    }

    /// Majority of the coordinates; `n` must be odd.
    pub fn majority(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "majority needs an odd number of variables, got {n}"
            )));
        }
        Self::from_index_fn(n, |m| (m.count_ones() as usize) < n.div_ceil(2))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// True when the function is `+1` at point `m`.
    pub fn is_plus(&self, m: usize) -> bool {
        (self.words[m / 64] >> (m % 64)) & 1 == 1
    }

    /// The `±1` value at point `m`.
    pub fn value(&self, m: usize) -> i8 {
        if self.is_plus(m) {
            1
        } else {
            -1
        }
    }

    pub fn set(&mut self, m: usize, plus: bool) {
        let bit = 1u64 << (m % 64);
        if plus {
            self.words[m / 64] |= bit;
        } else {
            self.words[m / 64] &= !bit;
        }
    }

    /// Number of points where the function equals `+1`.
    pub fn count_plus(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Output negation `-b`.
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.words.iter_mut().for_each(|w| *w = !*w);
        let mask = out.tail_mask();
        if out.words.len() == 1 {
            out.words[0] &= mask;
        }
        out
    }

    /// Bias `μ = E[b]`.
    pub fn bias(&self) -> f64 {
        let len = self.len() as f64;
        (2.0 * self.count_plus() as f64 - len) / len
    }

    /// Counts of `+1` values on the halves `x_i = +1` and `x_i = -1`.
    pub(crate) fn half_counts(&self, i: usize) -> (u64, u64) {
        let bit = i - 1;
        if bit < 6 {
            let lo = PLUS_HALF[bit];
            self.words.iter().fold((0, 0), |(p, q), &w| {
                (p + (w & lo).count_ones() as u64, q + (w & !lo).count_ones() as u64)
            })
        } else {
            let stride = 1usize << (bit - 6);
            self.words
                .iter()
                .enumerate()
                .fold((0, 0), |(p, q), (k, &w)| {
                    if k & stride == 0 {
                        (p + w.count_ones() as u64, q)
                    } else {
                        (p, q + w.count_ones() as u64)
                    }
                })
        }
    }

    /// Level-1 Fourier coefficient `z_i = E[b(X) X_i]` (1-based `i`),
    /// computed exactly from integer counts.
    pub fn level_one_coeff(&self, i: usize) -> Result<f64> {
        check_coord(i, self.n)?;
        let (plus, minus) = self.half_counts(i);
        Ok(2.0 * (plus as f64 - minus as f64) / self.len() as f64)
    }

    /// All level-1 coefficients `z_1, ..., z_n`.
    pub fn level_one(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|i| {
                let (plus, minus) = self.half_counts(i);
                2.0 * (plus as f64 - minus as f64) / self.len() as f64
            })
            .collect()
    }

    /// The `±1` values as a real function.
    pub fn to_real(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            values: (0..self.len()).map(|m| f64::from(self.value(m))).collect(),
        }
    }

    /// The 0/1 indicator of `{b = +1}`.
    pub fn indicator(&self) -> RealFunction {
        RealFunction {
            n: self.n,
            values: (0..self.len())
                .map(|m| if self.is_plus(m) { 1.0 } else { 0.0 })
                .collect(),
        }
    }
}

/// A dense real-valued function on `{-1, 1}^n`.
#[derive(Clone, PartialEq, Debug)]
pub struct RealFunction {
    n: usize,
    values: Vec<f64>,
}

impl RealFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::Length {
                expected: 1 << n,
                got: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { n, values })
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), 1 << n);
        Self { n, values }
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(n, vec![c; 1 << n])
    }

    /// Builds a function from its values at the point coordinates.
    pub fn from_point_fn(n: usize, mut f: impl FnMut(&[i8]) -> f64) -> Result<Self> {
        check_dim(n)?;
        let mut x = vec![1i8; n];
        let values = (0..1usize << n)
            .map(|m| {
                for (i, xi) in x.iter_mut().enumerate() {
                    *xi = if (m >> i) & 1 == 0 { 1 } else { -1 };
                }
                f(&x)
            })
            .collect();
        Self::new(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `E[f]` under the uniform measure.
    pub fn mean(&self) -> f64 {
        mean_of(&self.values)
    }

    /// `E[g(f)]` under the uniform measure.
    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        let mapped: Vec<f64> = self.values.iter().map(|&v| g(v)).collect();
        mean_of(&mapped)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|&v| g(v)).collect(),
        }
    }

    /// Pointwise combination of two functions on the same cube.
    pub fn zip_with(&self, other: &Self, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Length {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| g(a, b))
                .collect(),
        })
    }

    /// The reflected function `x ↦ f(-x)`.
    pub fn reflected(&self) -> Self {
        let top = self.len() - 1;
        Self {
            n: self.n,
            values: (0..self.len()).map(|m| self.values[m ^ top]).collect(),
        }
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Binary symmetric channel parameters.
///
/// `rho = 1 - 2 alpha` and `lambda = rho^2` are always derived from `alpha`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct NoiseParams {
    alpha: f64,
    rho: f64,
    lambda: f64,
}

impl NoiseParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&alpha) {
            return Err(Error::Alpha(alpha));
        }
        let rho = 1.0 - 2.0 * alpha;
        Ok(Self {
            alpha,
            rho,
            lambda: rho * rho,
        })
    }

    /// Parameters with correlation (approximately, to one ulp) `rho`.
    pub fn from_rho(rho: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "correlation {rho} outside [0, 1]"
            )));
        }
        Self::new((1.0 - rho) / 2.0)
    }

    /// Parameters with `lambda = rho^2` (approximately) equal to the argument.
    pub fn from_lambda(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda {lambda} outside [0, 1]"
            )));
        }
        Self::from_rho(lambda.sqrt())
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}
