//! Seed-deterministic PRNG for property suites.
//!
//! SplitMix64: 64-bit state, identical output on every platform. Test
//! suites depend on bit-for-bit reproducibility, so we do not go through
//! an external RNG crate whose stream may change between versions.

use crate::rat::Rat;

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0), via modulo. The tiny bias is
    /// irrelevant for test-instance generation.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform integer in the inclusive range `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    /// Random positive rational p/q with p, q in 1..=12.
    pub fn positive_rat(&mut self) -> Rat {
        let p = self.range_i64(1, 12);
        let q = self.range_i64(1, 12);
        Rat::new(p, q)
    }

    /// Random rational in [-5, 5] with denominator in 1..=6.
    pub fn signed_rat(&mut self) -> Rat {
        let q = self.range_i64(1, 6);
        let p = self.range_i64(-5 * q, 5 * q);
        Rat::new(p, q)
    }
}
