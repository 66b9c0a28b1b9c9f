//! One-dimensional compression and monotonization.
//!
//! The compression `C_j` looks at each fiber `{(x_{∼j}, +1), (x_{∼j}, −1)}`
//! and moves a lone `+1` to the `x_j = +1` slot. Two `+1`s or two `−1`s stay
//! put. The number of `+1` values is preserved, every level-1 coefficient
//! except `z_j` is unchanged, and `z_j` becomes nonnegative.

use serde::{Deserialize, Serialize};

use crate::cube::{check_coord, BooleanFunction, NoiseParams, PLUS_HALF};
use crate::error::{Error, Result};
use crate::info::coordinate_sum;

/// Slack for the floating comparisons in the property checks.
pub const CHECK_TOL: f64 = 1e-12;

/// One application of a compression during [`monotonize`].
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct CompressionStep {
    pub coord: usize,
    #[serde(rename = "L_before")]
    pub l_before: f64,
    #[serde(rename = "L_after")]
    pub l_after: f64,
}

/// Every compression applied by [`monotonize`] and the resulting function.
#[derive(Clone, PartialEq, Debug)]
pub struct CompressionTrace {
    pub steps: Vec<CompressionStep>,
    pub final_function: BooleanFunction,
    /// Indices into `steps` of the applications that changed the function.
    effective: Vec<usize>,
}

impl CompressionTrace {
    /// Number of steps that changed the function.
    pub fn effective_steps(&self) -> usize {
        self.effective.len()
    }

    /// JSON lines, one `{coord, L_before, L_after}` record per step.
    pub fn to_jsonl(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("plain struct serializes") + "\n")
            .collect()
    }

    /// True when `L` never decreases by more than [`CHECK_TOL`].
    pub fn objective_nondecreasing(&self) -> bool {
        self.steps.iter().all(|s| s.l_after >= s.l_before - CHECK_TOL)
    }
}

/// `C_j b` for a 1-based coordinate `j`.
pub fn compress(b: &BooleanFunction, j: usize) -> Result<BooleanFunction> {
    check_coord(j, b.n())?;
    let mut out = b.clone();
    compress_in_place(&mut out, j);
    Ok(out)
}

/// Returns whether anything changed.
fn compress_in_place(b: &mut BooleanFunction, j: usize) -> bool {
    let bit = j - 1;
    let words = b.words_mut();
    let mut changed = false;
    if bit < 6 {
        let lo = PLUS_HALF[bit];
        let s = 1u32 << bit;
        for w in words.iter_mut() {
            let plus = *w & lo;
            let minus = (*w >> s) & lo;
            let next = (plus | minus) | ((plus & minus) << s);
            changed |= next != *w;
            *w = next;
        }
    } else {
        let stride = 1usize << (bit - 6);
        for k in 0..words.len() {
            if k & stride == 0 {
                let (plus, minus) = (words[k], words[k + stride]);
                words[k] = plus | minus;
                words[k + stride] = plus & minus;
                changed |= minus & !plus != 0;
            }
        }
    }
    changed
}

/// True when `b(x_{∼i}, −1) ≤ b(x_{∼i}, +1)` on every fiber.
pub fn is_monotone(b: &BooleanFunction, i: usize) -> Result<bool> {
    check_coord(i, b.n())?;
    Ok(is_monotone_unchecked(b, i))
}

fn is_monotone_unchecked(b: &BooleanFunction, i: usize) -> bool {
    let bit = i - 1;
    let words = b.words();
    if bit < 6 {
        let lo = PLUS_HALF[bit];
        let s = 1u32 << bit;
        words.iter().all(|&w| ((w >> s) & lo) & !(w & lo) == 0)
    } else {
        let stride = 1usize << (bit - 6);
        (0..words.len())
            .filter(|k| k & stride == 0)
            .all(|k| words[k + stride] & !words[k] == 0)
    }
}

/// Monotone in every coordinate.
pub fn is_monotone_all(b: &BooleanFunction) -> bool {
    (1..=b.n()).all(|i| is_monotone_unchecked(b, i))
}

/// Compresses along `1, 2, ..., n` cyclically until a full pass changes
/// nothing, recording `L(b) = Σ_i I(b; Y_i)` around every application.
///
/// Passes are capped at `2^n`; the cap is never reached since every
/// effective compression strictly lowers `Σ_x b(x)·(number of −1 coordinates of x)`.
pub fn monotonize(b: &BooleanFunction, p: &NoiseParams) -> CompressionTrace {
    let n = b.n();
    let mut current = b.clone();
    let mut steps = Vec::new();
    let mut effective = Vec::new();
    let mut objective = coordinate_sum(&current, p);
    let max_passes = 1usize << n.min(30);
    for _ in 0..max_passes {
        let mut pass_changed = false;
        for j in 1..=n {
            let changed = compress_in_place(&mut current, j);
            let after = if changed {
                coordinate_sum(&current, p)
            } else {
                objective
            };
            if changed {
                effective.push(steps.len());
            }
            steps.push(CompressionStep { coord: j, l_before: objective, l_after: after });
            objective = after;
            pass_changed |= changed;
        }
        if !pass_changed {
            break;
        }
    }
    CompressionTrace { steps, final_function: current, effective }
}

/// `z_i(C_j b) = z_i(b)` exactly for `i ≠ j`, `|z_j(C_j b)| ≥ |z_j(b)|`
/// and `z_j(C_j b) ≥ 0`.
pub fn check_compression_coefficients(b: &BooleanFunction, j: usize) -> Result<bool> {
    let c = compress(b, j)?;
    let (before, after) = (b.level_one(), c.level_one());
    let others = (0..b.n())
        .filter(|&i| i != j - 1)
        .all(|i| before[i] == after[i]);
    let zj = after[j - 1];
    Ok(others && zj.abs() >= before[j - 1].abs() - CHECK_TOL && zj >= -CHECK_TOL)
}

/// `min_i z_i ≥ 0` for a function monotone in every coordinate.
///
/// A non-monotone input is reported as [`Error::Precondition`], distinct from
/// an `Ok(false)` failure of the inequality itself.
pub fn check_monotone_level_one_nonneg(b: &BooleanFunction) -> Result<bool> {
    if let Some(i) = (1..=b.n()).find(|&i| !is_monotone_unchecked(b, i)) {
        return Err(Error::Precondition(format!(
            "function is not monotone in coordinate {i}"
        )));
    }
    Ok(b.level_one().iter().all(|&z| z >= -CHECK_TOL))
}

/// `max_i z_i ≤ 1 − |μ|`.
pub fn check_level_one_bias_bound(b: &BooleanFunction) -> bool {
    let bound = 1.0 - b.bias().abs() + CHECK_TOL;
    b.level_one().iter().all(|&z| z <= bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(n: usize, rng: &mut ChaCha8Rng) -> BooleanFunction {
        BooleanFunction::from_index_fn(n, |_| rng.gen()).unwrap()
    }

    /// Fiber-by-fiber application of the case rule on `{0, 1}` values.
    fn compress_oracle(b: &BooleanFunction, j: usize) -> BooleanFunction {
        let mut out = b.clone();
        let bit = 1 << (j - 1);
        for m in (0..b.len()).filter(|m| m & bit == 0) {
            let hi = u8::from(b.is_plus(m));
            let lo = u8::from(b.is_plus(m | bit));
            let (new_hi, new_lo) = if hi + lo >= 1 { (1, hi + lo - 1) } else { (0, 0) };
            out.set(m, new_hi == 1);
            out.set(m | bit, new_lo == 1);
        }
        out
    }

    #[test]
    fn small_examples() {
        let neg = BooleanFunction::dictator(1, 1).unwrap().negated();
        assert_eq!(compress(&neg, 1).unwrap(), BooleanFunction::dictator(1, 1).unwrap());
        let and = BooleanFunction::from_index_fn(2, |m| m == 0).unwrap();
        assert_eq!(compress(&and, 1).unwrap(), and);
        assert!(is_monotone(&BooleanFunction::dictator(3, 1).unwrap(), 1).unwrap());
        assert!(!is_monotone(&neg, 1).unwrap());
        assert!(!is_monotone(&BooleanFunction::parity(2).unwrap(), 1).unwrap());
        assert!(compress(&and, 3).is_err());
    }

    #[test]
    fn word_kernel_matches_fiber_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=9 {
            for _ in 0..20 {
                let b = random(n, &mut rng);
                for j in 1..=n {
                    let c = compress(&b, j).unwrap();
                    assert_eq!(c, compress_oracle(&b, j));
                    assert_eq!(c.count_plus(), b.count_plus());
                    assert!(is_monotone(&c, j).unwrap());
                    assert_eq!(compress(&c, j).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn monotone_check_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..=8 {
            for _ in 0..30 {
                let b = random(n, &mut rng);
                for i in 1..=n {
                    let bit = 1 << (i - 1);
                    let pointwise = (0..b.len())
                        .filter(|m| m & bit == 0)
                        .all(|m| b.value(m | bit) <= b.value(m));
                    assert_eq!(is_monotone(&b, i).unwrap(), pointwise);
                }
            }
        }
    }

    #[test]
    fn monotonize_examples() {
        let p = NoiseParams::new(0.1).unwrap();
        let d = BooleanFunction::dictator(3, 2).unwrap();
        let t = monotonize(&d, &p);
        assert_eq!(t.final_function, d);
        assert_eq!(t.effective_steps(), 0);
        assert_eq!(t.steps.len(), 3);
        assert!(t.steps.iter().all(|s| s.l_before == s.l_after));

        let neg = BooleanFunction::dictator(1, 1).unwrap().negated();
        let t = monotonize(&neg, &p);
        assert_eq!(t.final_function, BooleanFunction::dictator(1, 1).unwrap());
        assert_eq!(t.effective_steps(), 1);
        let line = t.to_jsonl();
        assert!(line.starts_with("{\"coord\":1,\"L_before\":"));
        assert_eq!(line.lines().count(), t.steps.len());
    }

    #[test]
    fn monotonize_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let p = NoiseParams::new(0.2).unwrap();
        for _ in 0..200 {
            let b = random(6, &mut rng);
            let t = monotonize(&b, &p);
            assert!(is_monotone_all(&t.final_function));
            assert!(t.objective_nondecreasing());
            assert_eq!(t.final_function.count_plus(), b.count_plus());
        }
    }

    #[test]
    fn level_one_checks() {
        let maj = BooleanFunction::majority(3).unwrap();
        assert!(check_monotone_level_one_nonneg(&maj).unwrap());
        assert_eq!(maj.level_one(), vec![0.5, 0.5, 0.5]);
        let d = BooleanFunction::dictator(2, 1).unwrap();
        assert!(check_monotone_level_one_nonneg(&d).unwrap());
        assert!(check_level_one_bias_bound(&d));
        assert_eq!(d.level_one()[0], 1.0 - d.bias().abs());
        assert!(check_level_one_bias_bound(&BooleanFunction::constant(3, true).unwrap()));
        let parity = BooleanFunction::parity(2).unwrap();
        assert!(matches!(
            check_monotone_level_one_nonneg(&parity),
            Err(Error::Precondition(_))
        ));
        let neg = d.negated();
        assert!(check_compression_coefficients(&neg, 1).unwrap());
        assert_eq!(compress(&neg, 1).unwrap().level_one_coeff(1).unwrap(), 1.0);
    }
}
