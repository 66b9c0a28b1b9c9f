//! Mutual information of Boolean functions observed through a binary
//! symmetric channel.
//!
//! Points of `{-1, 1}^n` are indexed by `m ∈ [0, 2^n)`: bit `i` of `m` is 0
//! when `x_{i+1} = +1` and 1 when `x_{i+1} = −1`. Subsets of coordinates use
//! the same bit masks, so the Fourier coefficient of the set `S` sits at index
//! `S`. Coordinates in the public API are 1-based. All entropies are in bits.
//!
//! ```
//! use hyperinfo::{capacity, sum_coordinate_mi, BooleanFunction, NoiseParams};
//!
//! let p = NoiseParams::new(0.25)?;
//! let dictator = BooleanFunction::dictator(3, 1)?;
//! let report = sum_coordinate_mi(&dictator, &p);
//! assert_eq!(report.sum_coord_mi, capacity(&p));
//! # Ok::<(), hyperinfo::Error>(())
//! ```

pub mod bound;
pub mod compression;
pub mod cube;
pub mod error;
pub mod grid;
pub mod highnoise;
pub mod info;
pub mod io;
pub mod noise;
pub mod search;
pub mod transform;

pub use bound::{
    extreme_point_bound, g_mu, h_mu, m_k, m_k_prime, psi_mu, series_f, verify_bound_chain,
    BiasedParams, ChainReport, PolytopePoint,
};
pub use compression::{
    check_compression_coefficients, check_level_one_bias_bound, check_monotone_level_one_nonneg,
    compress, is_monotone, is_monotone_all, monotonize, CompressionStep, CompressionTrace,
};
pub use cube::{point_index, point_vector, BooleanFunction, NoiseParams, RealFunction, MAX_DIM};
pub use error::{Error, Result};
pub use info::{
    binary_entropy, capacity, coordinate_mi, coordinate_sum, ent_functional, mutual_information,
    posterior, sum_coordinate_mi, MIReport, Probability,
};
pub use noise::{apply_noise, apply_noise_direct, noise_spectrum};
pub use search::{
    canonicalize, enumerate_canonical, run_sharded, verify_coordinate_sum, verify_total_mi,
    CanonicalClass, RunConfig, RunOutcome, SearchReport, SearchTask,
};
pub use transform::{inverse_wht, level_weight, wht, FourierSpectrum};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/fourier.md")]
    mod fourier {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/information.md")]
    mod information {}
    #[doc = include_str!("../../../book/src/compression.md")]
    mod compression {}
    #[doc = include_str!("../../../book/src/coordinate-bound.md")]
    mod coordinate_bound {}
    #[doc = include_str!("../../../book/src/high-noise.md")]
    mod high_noise {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
