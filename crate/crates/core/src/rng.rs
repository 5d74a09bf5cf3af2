//! Seeded random streams.
//!
//! Every stream is xoshiro256** seeded through SplitMix64
//! (`Xoshiro256StarStar::seed_from_u64`). Trial `t` of a run seeded with `s`
//! uses the stream seeded with `s ^ (t * 0x9E3779B97F4A7C15)` (wrapping), so
//! each trial can be reproduced on its own and results do not depend on how
//! trials are scheduled across threads.
//!
//! Uniforms on `[0, 1)` are `(next_u64() >> 11) * 2^-53`. Standard normals
//! use Box-Muller on two uniforms, `sqrt(-2 ln(1 - u1)) * cos(2 pi u2)`.

use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

const TRIAL_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Name of the generator, reported alongside Monte Carlo results.
pub const ALGORITHM: &str = "xoshiro256** (SplitMix64 seeding)";

#[derive(Debug, Clone)]
pub struct Stream {
    inner: Xoshiro256StarStar,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Independent stream for trial `trial` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(seed ^ trial.wrapping_mul(TRIAL_STRIDE))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Count of successes in `n` Bernoulli(`p`) draws, one uniform each.
    pub fn binomial(&mut self, n: u64, p: f64) -> u64 {
        if p <= 0.0 {
            return 0;
        }
        if p >= 1.0 {
            return n;
        }
        (0..n).filter(|_| self.bernoulli(p)).count() as u64
    }

    /// Multinomial counts by sequential binomial conditioning over the bins.
    pub fn multinomial(&mut self, n: u64, probs: &[f64]) -> Vec<u64> {
        let mut counts = vec![0; probs.len()];
        let mut remaining = n;
        let mut mass = 1.0;
        for (i, &p) in probs.iter().enumerate() {
            if remaining == 0 {
                break;
            }
            if i + 1 == probs.len() {
                counts[i] = remaining;
                break;
            }
            let conditional = if mass > 0.0 { (p / mass).min(1.0) } else { 0.0 };
            let k = self.binomial(remaining, conditional);
            counts[i] = k;
            remaining -= k;
            mass -= p;
        }
        counts
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
