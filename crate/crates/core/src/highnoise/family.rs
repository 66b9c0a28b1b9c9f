//! Densities used by the high-noise scans.
//!
//! A density is a nonnegative function with `E[f] = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{BooleanFunction, RealFunction};
use crate::error::{Error, Result};

/// Sup-norm cap for random densities.
pub const RANDOM_SUP_BOUND: f64 = 4.0;

/// Names accepted by [`named_density`].
pub const FAMILY_NAMES: [&str; 6] = [
    "dictator",
    "even-pair",
    "majority3",
    "majority5",
    "tribes6",
    "random",
];

/// `1{b = +1} / P(b = +1)`.
pub fn normalized_indicator(b: &BooleanFunction) -> Result<RealFunction> {
    let plus = b.count_plus();
    if plus == 0 {
        return Err(Error::ZeroFunction);
    }
    let scale = b.len() as f64 / plus as f64;
    Ok(b.indicator().map(|v| v * scale))
}

/// OR of the two ANDs `x_1 x_2 x_3` and `x_4 x_5 x_6` (true ↦ `+1`).
pub fn tribes6() -> BooleanFunction {
    BooleanFunction::from_index_fn(6, |m| m & 0b111 == 0 || m & 0b111_000 == 0)
        .expect("six variables are supported")
}

/// A uniformly drawn density with `‖f‖_∞ ≤ 4`, by rejection.
pub fn random_density(n: usize, rng: &mut impl Rng) -> Result<RealFunction> {
    loop {
        let raw: Vec<f64> = (0..1usize << n).map(|_| rng.gen::<f64>()).collect();
        let f = RealFunction::new(n, raw)?;
        let mean = f.mean();
        if mean > 0.0 && f.max() / mean <= RANDOM_SUP_BOUND {
            return Ok(f.map(|v| v / mean));
        }
    }
}

/// A member of the test family by name. `n` sizes the random density and is
/// otherwise ignored.
pub fn named_density(name: &str, n: usize, seed: u64) -> Result<RealFunction> {
    match name {
        "dictator" => RealFunction::from_point_fn(1, |x| 1.0 + f64::from(x[0])),
        "even-pair" => {
            RealFunction::from_point_fn(2, |x| 1.0 + 0.5 * f64::from(x[0] * x[1]))
        }
        "majority3" => normalized_indicator(&BooleanFunction::majority(3)?),
        "majority5" => normalized_indicator(&BooleanFunction::majority(5)?),
        "tribes6" => normalized_indicator(&tribes6()),
        "random" => random_density(n, &mut ChaCha8Rng::seed_from_u64(seed)),
        other => Err(Error::InvalidParameter(format!(
            "unknown density family {other:?}; expected one of {}",
            FAMILY_NAMES.join(", ")
        ))),
    }
}

/// The fixed members plus two seeded random densities on 4 and 6 variables.
pub fn standard_family(seed: u64) -> Vec<(String, RealFunction)> {
    let mut out: Vec<(String, RealFunction)> = FAMILY_NAMES[..5]
        .iter()
        .map(|&name| (name.to_string(), named_density(name, 0, seed).expect("fixed family")))
        .collect();
    for n in [4, 6] {
        out.push((
            format!("random{n}"),
            named_density("random", n, seed.wrapping_add(n as u64)).expect("random density"),
        ));
    }
    out
}
