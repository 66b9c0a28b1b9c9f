//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use hyperinfo::{point_index, point_vector, BooleanFunction, RealFunction};
use rand::Rng;

pub fn random_boolean(n: usize, rng: &mut impl Rng) -> BooleanFunction {
    BooleanFunction::from_index_fn(n, |_| rng.gen()).unwrap()
}

pub fn random_real(n: usize, rng: &mut impl Rng) -> RealFunction {
    RealFunction::new(n, (0..1usize << n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

fn permutations(items: Vec<usize>) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.clone();
        let head = rest.remove(i);
        for mut tail in permutations(rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Every `x ↦ (s_1 x_{π(1)}, ..., s_n x_{π(n)})` as an index map, built from
/// explicit coordinate vectors.
pub fn signed_permutation_maps(n: usize) -> Vec<Vec<usize>> {
    let mut maps = Vec::new();
    for perm in permutations((0..n).collect()) {
        for signs in 0..1usize << n {
            let map = (0..1usize << n)
                .map(|m| {
                    let x = point_vector(m, n).unwrap();
                    let y: Vec<i8> = (0..n)
                        .map(|i| {
                            let s = if (signs >> i) & 1 == 1 { -1 } else { 1 };
                            s * x[perm[i]]
                        })
                        .collect();
                    point_index(&y).unwrap()
                })
                .collect();
            maps.push(map);
        }
    }
    maps
}

/// Orbit sizes under signed permutations and output negation, by union-find
/// over all `2^(2^n)` tables. Practical for `n ≤ 3`.
pub fn brute_force_orbit_sizes(n: usize) -> Vec<u64> {
    let size = 1usize << n;
    let count = 1usize << size;
    let maps = signed_permutation_maps(n);
    let mut parent: Vec<usize> = (0..count).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in 0..count {
        for map in &maps {
            let image = (0..size).fold(0usize, |acc, m| acc | ((t >> map[m]) & 1) << m);
            for other in [image, image ^ (count - 1)] {
                let (a, b) = (find(&mut parent, t), find(&mut parent, other));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for t in 0..count {
        *sizes.entry(find(&mut parent, t)).or_insert(0u64) += 1;
    }
    sizes.into_values().collect()
}
