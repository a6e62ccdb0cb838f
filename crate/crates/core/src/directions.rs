//! Seeded random unit directions.
//!
//! The single randomness source for random Tukey depth, projection depth and grid
//! depth. Directions are produced sequentially, so the first `m` directions for a seed
//! are a prefix of the first `m' > m`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// A count of random directions and the seed that generates them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionBudget {
    pub count: usize,
    pub seed: u64,
}

impl DirectionBudget {
    pub fn new(count: usize, seed: u64) -> Self {
        Self {
            count: count.max(1),
            seed,
        }
    }
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal vectors of length `len`, `count` of them, from one stream.
pub fn gaussian_vectors(len: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| (0..len).map(|_| StandardNormal.sample(&mut rng)).collect())
        .collect()
}

/// Uniformly distributed unit vectors in `R^dim`.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_property_and_unit_length() {
        let a = sphere_directions(3, 5, 7);
        let b = sphere_directions(3, 12, 7);
        assert_eq!(&b[..5], &a[..]);
        for v in &b {
            let n: f64 = v.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert_ne!(sphere_directions(3, 1, 8), sphere_directions(3, 1, 7));
    }
}
