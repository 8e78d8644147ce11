//! Randomly shifted Halton points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

fn radical_inverse(base: u64, mut i: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton sequence in up to eight dimensions with a Cranley–Patterson
/// rotation drawn from `seed`. Deterministic for a fixed seed.
#[derive(Debug, Clone)]
pub struct Halton<const D: usize> {
    index: u64,
    shift: [f64; D],
}

impl<const D: usize> Halton<D> {
    pub fn new(seed: u64) -> Self {
        assert!(D <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = std::array::from_fn(|_| rng.random::<f64>());
        Self { index: 0, shift }
    }
}

impl<const D: usize> Iterator for Halton<D> {
    type Item = [f64; D];

    fn next(&mut self) -> Option<[f64; D]> {
        self.index += 1;
        let i = self.index;
        Some(std::array::from_fn(|d| {
            let x = radical_inverse(PRIMES[d], i) + self.shift[d];
            x - x.floor()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unshifted_prefix() {
        assert_eq!(radical_inverse(2, 1), 0.5);
        assert_eq!(radical_inverse(2, 3), 0.75);
        assert!((radical_inverse(3, 2) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn points_fill_the_unit_cube_evenly() {
        let n = 4096;
        let mean: f64 = Halton::<3>::new(7).take(n).map(|p| p[0] * p[1] * p[2]).sum::<f64>() / n as f64;
        assert!((mean - 0.125).abs() < 2e-3);
        let a: Vec<_> = Halton::<2>::new(1).take(5).collect();
        let b: Vec<_> = Halton::<2>::new(1).take(5).collect();
        assert_eq!(a, b);
    }
}
