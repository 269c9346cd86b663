//! Seeded sampling of small-height exact rationals and generic parameters.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{ratio, Scalar};
use crate::hamiltonian::Parameters;

/// Deterministic source of exact random points.
pub struct ExactSampler {
    rng: ChaCha8Rng,
}

impl ExactSampler {
    pub fn new(seed: u64) -> Self {
        ExactSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A rational `n/d` with `|n| <= 9`, `1 <= d <= 7`.
    pub fn rational(&mut self) -> Scalar {
        let n = self.rng.gen_range(-9..=9);
        let d = self.rng.gen_range(1..=7);
        ratio(n, d)
    }

    pub fn nonzero_rational(&mut self) -> Scalar {
        loop {
            let r = self.rational();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Parameters with every `alpha_i` nonzero and away from small-integer
    /// resonances.
    pub fn generic_parameters(&mut self) -> Parameters {
        loop {
            let tail = [self.rational(), self.rational(), self.rational()];
            let params = Parameters::from_tail(tail[0].clone(), tail[1].clone(), tail[2].clone());
            if params
                .alpha()
                .iter()
                .all(|a| !a.is_zero() && !a.denom().is_one())
            {
                return params;
            }
        }
    }

    /// Generic parameters with every `alpha_i` in `[-1, 2]`, for numeric
    /// runs where large exponents of `t` would swamp double precision.
    pub fn small_parameters(&mut self) -> Parameters {
        loop {
            let mut tail = || ratio(self.rng.gen_range(-3..=3), self.rng.gen_range(2..=6));
            let params = Parameters::from_tail(tail(), tail(), tail());
            if params.alpha().iter().all(|a| {
                !a.is_zero() && !a.denom().is_one() && *a >= ratio(-1, 1) && *a <= ratio(2, 1)
            }) {
                return params;
            }
        }
    }

    pub fn phase_point(&mut self) -> [Scalar; 6] {
        std::array::from_fn(|_| self.rational())
    }

    pub fn time(&mut self) -> Scalar {
        self.nonzero_rational()
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn next_seed(&mut self) -> u64 {
        self.rng.gen()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible() {
        let mut a = ExactSampler::new(7);
        let mut b = ExactSampler::new(7);
        for _ in 0..10 {
            assert_eq!(a.rational(), b.rational());
        }
        let p = a.generic_parameters();
        let sum: Scalar = p.alpha().iter().sum();
        assert!(sum.is_one());
    }
}
