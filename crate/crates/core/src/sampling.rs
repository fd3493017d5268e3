//! Seeded low-discrepancy point sets.
//!
//! Halton sequences with a Cranley–Patterson rotation drawn from a ChaCha
//! stream, so a seed fixes the whole point set on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Radical inverse of `index` in the given base.
pub fn radical_inverse(mut index: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while index > 0 {
        acc += (index % b) as f64 * scale;
        index /= b;
        scale *= inv;
    }
    acc
}

/// A shifted Halton sequence in `[0,1)^dim`.
#[derive(Debug, Clone)]
pub struct Halton {
    shift: Vec<f64>,
    next: u64,
}

impl Halton {
    pub fn new(dim: usize, seed: u64) -> Self {
        assert!(dim <= PRIMES.len(), "Halton dimension {dim} unsupported");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim).map(|_| rng.random::<f64>()).collect();
        // Skipping the first points avoids the correlated start of the sequence.
        Halton { shift, next: 20 }
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    pub fn point(&self, index: u64) -> Vec<f64> {
        self.shift
            .iter()
            .zip(PRIMES)
            .map(|(s, p)| (radical_inverse(index, p) + s).fract())
            .collect()
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        let p = self.point(self.next);
        self.next += 1;
        p
    }
}

/// `count` quasi-uniform unit vectors in `R^dim`, via Box–Muller on Halton pairs.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let pairs = dim.div_ceil(2);
    let halton = Halton::new(2 * pairs, seed);
    (0..count as u64)
        .map(|k| {
            let u = halton.point(k + 20);
            let mut x = Vec::with_capacity(2 * pairs);
            for p in 0..pairs {
                let r = (-2.0 * (1.0 - u[2 * p]).ln()).sqrt();
                let t = std::f64::consts::TAU * u[2 * p + 1];
                x.push(r * t.cos());
                x.push(r * t.sin());
            }
            x.truncate(dim);
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm < 1e-300 {
                let mut e = vec![0.0; dim];
                e[0] = 1.0;
                e
            } else {
                x.iter().map(|a| a / norm).collect()
            }
        })
        .collect()
}
