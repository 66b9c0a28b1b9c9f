//! Input permutation, input negation and output negation acting on truth tables.
//!
//! Tables on `n ≤ 5` variables are packed into the low `2^n` bits of a `u64`.
//! The ordering key of a table puts point 0 in the most significant position,
//! so comparing keys compares the `0`/`1` table strings lexicographically.

use crate::cube::BooleanFunction;
use crate::error::{Error, Result};

/// Largest dimension the symmetry engine accepts.
pub const MAX_SEARCH_DIM: usize = 5;

/// Dimensions above this need an explicit long-run opt-in.
pub const IN_MEMORY_MAX_DIM: usize = 4;

pub(crate) fn check_search_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SEARCH_DIM {
        return Err(Error::Dimension { n, max: MAX_SEARCH_DIM });
    }
    Ok(())
}

/// Refuses `n > 4` unless `allow_long_run` is set.
pub fn check_run_size(n: usize, allow_long_run: bool) -> Result<()> {
    check_search_dim(n)?;
    if n > IN_MEMORY_MAX_DIM && !allow_long_run {
        return Err(Error::ResourceGuard(format!(
            "exhaustive search on n = {n} covers 2^{} functions; pass the long-run flag to proceed",
            1usize << n
        )));
    }
    Ok(())
}

/// Number of points `2^n`.
pub(crate) fn points(n: usize) -> u32 {
    1u32 << n
}

fn full_mask(n: usize) -> u64 {
    (1u64 << points(n)) - 1
}

/// Key of a packed table: the bit-reversal of its `2^n` bits.
pub fn table_key(table: u64, n: usize) -> u64 {
    table.reverse_bits() >> (64 - points(n))
}

/// Inverse of [`table_key`] (the map is an involution).
pub fn key_table(key: u64, n: usize) -> u64 {
    table_key(key, n)
}

/// One coordinate map `m ↦ σ(m)` of the hyperoctahedral group.
#[derive(Clone, Debug)]
struct PointMap {
    /// For each key position `q` (point `2^n − 1 − q`), the key position of
    /// the source point `σ(2^n − 1 − q)`.
    source_pos: Vec<u8>,
}

/// The group of size `2 · n! · 2^n`: permutations and negations of the
/// inputs, combined with an optional output negation.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    n: usize,
    maps: Vec<PointMap>,
    perms: Vec<(Vec<usize>, u32)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl SymmetryGroup {
    pub fn new(n: usize) -> Result<Self> {
        check_search_dim(n)?;
        let size = points(n) as usize;
        let mut maps = Vec::new();
        let mut perms = Vec::new();
        for perm in permutations(n) {
            for neg in 0..size as u32 {
                let sigma = |m: usize| {
                    let mut out = 0usize;
                    for (i, &target) in perm.iter().enumerate() {
                        out |= ((m >> i) & 1) << target;
                    }
                    out ^ neg as usize
                };
                let source_pos = (0..size)
                    .map(|q| (size - 1 - sigma(size - 1 - q)) as u8)
                    .collect();
                maps.push(PointMap { source_pos });
                perms.push((perm.clone(), neg));
            }
        }
        Ok(Self { n, maps, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Group order, output negation included.
    pub fn order(&self) -> usize {
        2 * self.maps.len()
    }

    /// Image key under spatial element `g` (no output negation).
    #[inline]
    fn image_key(&self, g: usize, key: u64) -> u64 {
        let mut out = 0u64;
        for (q, &src) in self.maps[g].source_pos.iter().enumerate() {
            out |= ((key >> src) & 1) << q;
        }
        out
    }

    /// Applies group element `g ∈ [0, order)` to `b`: elements `2k` and
    /// `2k + 1` share the input map `k`, the odd one also negates the output.
    pub fn apply(&self, g: usize, b: &BooleanFunction) -> Result<BooleanFunction> {
        if b.n() != self.n || g >= self.order() {
            return Err(Error::InvalidParameter(format!(
                "group element {g} of order {} on n = {} applied to n = {}",
                self.order(),
                self.n,
                b.n()
            )));
        }
        let key = table_key(b.to_bits().expect("n <= 5"), self.n);
        let mut image = self.image_key(g / 2, key);
        if g % 2 == 1 {
            image ^= full_mask(self.n);
        }
        BooleanFunction::from_bits(self.n, key_table(image, self.n))
    }

    /// Coordinate permutation (0-based targets) and input negation mask of element `g`.
    pub fn describe(&self, g: usize) -> (&[usize], u32, bool) {
        let (perm, neg) = &self.perms[g / 2];
        (perm, *neg, g % 2 == 1)
    }

    /// Smallest key in the orbit of `key`.
    pub fn canonical_key(&self, key: u64) -> u64 {
        let full = full_mask(self.n);
        (0..self.maps.len())
            .map(|g| {
                let img = self.image_key(g, key);
                img.min(img ^ full)
            })
            .min()
            .unwrap_or(key)
    }

    /// Orbit size when `key` is the minimum of its orbit, `None` otherwise.
    pub fn canonical_orbit(&self, key: u64) -> Option<u64> {
        let full = full_mask(self.n);
        let mut stabilizer = 0u64;
        for g in 0..self.maps.len() {
            let img = self.image_key(g, key);
            let neg = img ^ full;
            if img < key || neg < key {
                return None;
            }
            stabilizer += u64::from(img == key) + u64::from(neg == key);
        }
        Some(self.order() as u64 / stabilizer)
    }
}

/// An orbit, represented by its lexicographically smallest table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalClass {
    pub representative: BooleanFunction,
    pub key: u64,
    pub orbit_size: u64,
}

/// The smallest table in the orbit of `b`.
pub fn canonicalize(b: &BooleanFunction) -> Result<BooleanFunction> {
    let group = SymmetryGroup::new(b.n())?;
    let key = table_key(b.to_bits().expect("n <= 5"), b.n());
    BooleanFunction::from_bits(b.n(), key_table(group.canonical_key(key), b.n()))
}

/// All orbits in increasing key order.
pub fn enumerate_canonical(n: usize, allow_long_run: bool) -> Result<Vec<CanonicalClass>> {
    check_run_size(n, allow_long_run)?;
    let group = SymmetryGroup::new(n)?;
    let end = 1u64 << points(n);
    let mut out = Vec::new();
    for key in 0..end {
        if let Some(orbit_size) = group.canonical_orbit(key) {
            out.push(CanonicalClass {
                representative: BooleanFunction::from_bits(n, key_table(key, n))?,
                key,
                orbit_size,
            });
        }
    }
    Ok(out)
}

/// Key of the orbit containing the dictators `±x_i`.
pub fn dictator_key(n: usize) -> Result<u64> {
    let d = BooleanFunction::dictator(n, 1)?;
    let group = SymmetryGroup::new(n)?;
    Ok(group.canonical_key(table_key(d.to_bits().expect("n <= 5"), n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::table_string;

    #[test]
    fn key_orders_strings() {
        let n = 3;
        let mut tables: Vec<u64> = (0..256).collect();
        tables.sort_by_key(|&t| table_key(t, n));
        let strings: Vec<String> = tables
            .iter()
            .map(|&t| table_string(&BooleanFunction::from_bits(n, t).unwrap()))
            .collect();
        assert!(strings.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn orders() {
        assert_eq!(SymmetryGroup::new(1).unwrap().order(), 4);
        assert_eq!(SymmetryGroup::new(3).unwrap().order(), 96);
        assert_eq!(SymmetryGroup::new(5).unwrap().order(), 7680);
        assert!(SymmetryGroup::new(6).is_err());
    }

    #[test]
    fn class_counts() {
        for (n, count) in [(1, 2), (2, 4), (3, 14), (4, 222)] {
            let classes = enumerate_canonical(n, false).unwrap();
            assert_eq!(classes.len(), count);
            let total: u64 = classes.iter().map(|c| c.orbit_size).sum();
            assert_eq!(total, 1u64 << (1 << n));
            assert!(classes.windows(2).all(|w| w[0].key < w[1].key));
        }
        assert!(matches!(enumerate_canonical(5, false), Err(Error::ResourceGuard(_))));
    }

    #[test]
    fn canonical_is_idempotent_and_invariant() {
        let x1 = BooleanFunction::dictator(2, 1).unwrap();
        let x2 = BooleanFunction::dictator(2, 2).unwrap();
        assert_eq!(canonicalize(&x1.negated()).unwrap(), canonicalize(&x2).unwrap());
        let group = SymmetryGroup::new(3).unwrap();
        let b = BooleanFunction::from_bits(3, 0b1001_0110).unwrap();
        let c = canonicalize(&b).unwrap();
        assert_eq!(canonicalize(&c).unwrap(), c);
        for g in 0..group.order() {
            assert_eq!(canonicalize(&group.apply(g, &b).unwrap()).unwrap(), c);
        }
        assert_eq!(dictator_key(2).unwrap(), 0b0011);
    }
}
