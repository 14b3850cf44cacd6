//! Shared dataset helpers for the criterion benchmarks.

use binfuse::SplitMix64;

/// `n` distinct pseudorandom keys. Distinctness is structural: splitmix64
/// steps its state by an odd constant and finalizes with a bijection, so a
/// single stream cannot repeat within 2^64 outputs.
pub fn sample_keys(n: usize, seed: u64) -> Vec<u64> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.next()).collect()
}
