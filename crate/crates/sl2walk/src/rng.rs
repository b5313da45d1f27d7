//! Counter-based deterministic random number generation.
//!
//! Every random quantity in this crate is a pure function of
//! `(master_seed, trial, counter)`, so trials can run in any order or in
//! parallel and still reproduce bit-identical results.

/// SplitMix64 finalizer: bijective on `u64`, strong avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Keyed counter output. The three key lanes are combined through two
/// finalizer rounds, so distinct `(seed, trial, counter)` triples give
/// unrelated outputs.
#[inline]
pub fn derive(master_seed: u64, trial: u64, counter: u64) -> u64 {
    let mut z = master_seed;
    z = mix64(z ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x2545_f491_4f6c_dd1d));
    z = mix64(z ^ counter.wrapping_mul(0x6a09_e667_f3bc_c909).wrapping_add(0xbb67_ae85_84ca_a73b));
    z
}

/// A stream view over [`derive`] for one `(master_seed, trial)` pair.
///
/// The counter advances by one per draw; rejection sampling consumes
/// additional counter values, never reuses them.
#[derive(Debug, Clone)]
pub struct CounterRng {
    master_seed: u64,
    trial: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(master_seed: u64, trial: u64) -> Self {
        Self { master_seed, trial, counter: 0 }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = derive(self.master_seed, self.trial, self.counter);
        self.counter += 1;
        v
    }

    /// Unbiased draw from `0..m` by rejection.
    ///
    /// # Panics
    /// Panics if `m == 0`.
    #[inline]
    pub fn below(&mut self, m: u64) -> u64 {
        assert!(m > 0, "empty range");
        // Largest multiple of m that fits in u64; values at or above it
        // would bias the remainder.
        let zone = u64::MAX - (u64::MAX % m);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % m;
            }
        }
    }

    /// Fair coin from the top bit.
    #[inline]
    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }
}
