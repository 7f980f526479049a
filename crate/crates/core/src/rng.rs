//! Seeded 64-bit linear congruential generator.
//!
//! The state advances as `x' = 6364136223846793005 * x + 1442695040888963407 (mod 2^64)`
//! and each draw uses the high 32 bits, so a seed reproduces the same instance
//! stream in any implementation of the same recurrence.

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform draw from `0..n` (multiply-shift reduction). `n` must be non-zero.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }

    /// Uniform draw from `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}
