//! Xor filter baseline: three equal blocks, one slot per block, global
//! peeling over the whole array. Same query shape as the fuse filters but
//! without segmentation, so construction walks the array in random order.

use rand::RngCore;

use crate::Error;
use crate::fuse::{ConstructionReport, DEFAULT_MAX_ATTEMPTS};
use crate::hashing::{self, Fingerprint, Locations, Seed, reduce32};
use crate::peel::{self, Attempts, PeelingState};

/// An xor filter over a fixed key set; same query contract as
/// [`FuseFilter`](crate::FuseFilter) at 1.23n + 32 slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorFilter<F> {
    seed: Seed,
    block_length: usize,
    fingerprints: Vec<F>,
}

/// Xor filter with 8-bit fingerprints.
pub type Xor8 = XorFilter<u8>;
/// Xor filter with 16-bit fingerprints.
pub type Xor16 = XorFilter<u16>;

/// Slot budget for `n` keys: floor(1.23 n) + 32, rounded up to three equal
/// blocks.
pub(crate) fn array_length(n: usize) -> usize {
    (((1.23 * n as f64).floor() as usize) + 32).div_ceil(3) * 3
}

#[inline]
fn locations(h: u64, block_length: usize) -> Locations {
    let block = block_length as u32;
    Locations::new(
        [
            reduce32(h as u32, block) as usize,
            block_length + reduce32(h.rotate_left(21) as u32, block) as usize,
            2 * block_length + reduce32(h.rotate_left(42) as u32, block) as usize,
            0,
        ],
        3,
    )
}

impl<F: Fingerprint> XorFilter<F> {
    /// Builds a filter over `keys`, which must be distinct, drawing seeds
    /// from the thread RNG.
    pub fn construct(keys: &[u64]) -> Result<(Self, ConstructionReport), Error> {
        Self::construct_with(keys, DEFAULT_MAX_ATTEMPTS, &mut rand::rng())
    }

    /// [`construct`](Self::construct) with an explicit attempt budget and
    /// seed source.
    pub fn construct_with(
        keys: &[u64],
        max_attempts: u32,
        rng: &mut impl RngCore,
    ) -> Result<(Self, ConstructionReport), Error> {
        let block_length = array_length(keys.len()) / 3;
        let mut builder = Builder::new(keys, block_length);
        let (fingerprints, report) = peel::drive(&mut builder, max_attempts, rng)?;
        Ok((
            XorFilter {
                seed: report.final_seed,
                block_length,
                fingerprints,
            },
            report,
        ))
    }

    /// Single construction attempt at a fixed seed.
    pub fn construct_with_seed(
        keys: &[u64],
        seed: Seed,
    ) -> Result<(Self, ConstructionReport), Error> {
        let block_length = array_length(keys.len()) / 3;
        let mut builder = Builder::new(keys, block_length);
        match builder.attempt(seed) {
            Some(fingerprints) => Ok((
                XorFilter {
                    seed,
                    block_length,
                    fingerprints,
                },
                ConstructionReport {
                    attempts: 1,
                    success: true,
                    final_seed: seed,
                },
            )),
            None => Err(Error::ConstructionFailed { attempts: 1 }),
        }
    }

    pub fn contains(&self, key: u64) -> bool {
        let h = hashing::mix64(key, self.seed);
        let mut acc = F::from_hash(h);
        for &slot in locations(h.value(), self.block_length).as_slice() {
            acc ^= self.fingerprints[slot];
        }
        acc == F::default()
    }

    /// Storage cost in bits per key for a set of `n` keys.
    pub fn bits_per_key(&self, n: usize) -> Result<f64, Error> {
        if n == 0 {
            return Err(Error::UndefinedBitsPerKey);
        }
        Ok(self.fingerprints.len() as f64 * f64::from(F::BITS) / n as f64)
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn fingerprints(&self) -> &[F] {
        &self.fingerprints
    }

    pub(crate) fn from_parts(seed: Seed, block_length: usize, fingerprints: Vec<F>) -> Self {
        debug_assert_eq!(fingerprints.len(), block_length * 3);
        XorFilter {
            seed,
            block_length,
            fingerprints,
        }
    }
}

struct Builder<'k, F> {
    keys: &'k [u64],
    block_length: usize,
    hashed: Vec<u64>,
    state: PeelingState,
    _fingerprint: std::marker::PhantomData<F>,
}

impl<'k, F: Fingerprint> Builder<'k, F> {
    fn new(keys: &'k [u64], block_length: usize) -> Self {
        Self {
            keys,
            block_length,
            hashed: vec![0; keys.len()],
            state: PeelingState::new(block_length * 3, keys.len()),
            _fingerprint: std::marker::PhantomData,
        }
    }
}

impl<F: Fingerprint> Attempts for Builder<'_, F> {
    type Output = Vec<F>;

    fn attempt(&mut self, seed: Seed) -> Option<Vec<F>> {
        for (slot, &key) in self.hashed.iter_mut().zip(self.keys) {
            *slot = hashing::mix64(key, seed).value();
        }
        let block_length = self.block_length;
        let locate = |h: u64| locations(h, block_length);
        self.state.reset();
        for &h in &self.hashed {
            self.state.add(h, locate(h).as_slice());
        }
        if self.state.peel(locate) < self.keys.len() {
            return None;
        }
        Some(peel::assign(
            self.state.order(),
            block_length * 3,
            locate,
        ))
    }

    fn has_duplicate_hashes(&self) -> bool {
        peel::contains_duplicates(&self.hashed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn sample_keys(n: usize, seed: u64) -> Vec<u64> {
        let mut rng = SplitMix64::new(seed);
        let mut seen = std::collections::HashSet::with_capacity(n);
        let mut keys = Vec::with_capacity(n);
        while keys.len() < n {
            let key = rng.next();
            if seen.insert(key) {
                keys.push(key);
            }
        }
        keys
    }

    #[test]
    fn array_length_is_a_multiple_of_three_at_the_published_rate() {
        assert_eq!(array_length(0), 33);
        assert_eq!(array_length(1_000_000), 1_230_033);
        // 9.840264 bits per key at 8-bit fingerprints.
        let bits = array_length(1_000_000) as f64 * 8.0 / 1e6;
        assert!((9.8..=9.95).contains(&bits));
        for n in [0usize, 1, 10, 997, 12_345] {
            assert_eq!(array_length(n) % 3, 0);
            assert!(array_length(n) >= (1.23 * n as f64).floor() as usize + 32);
        }
    }

    #[test]
    fn members_are_always_found() {
        for n in [0usize, 1, 2, 100, 10_000] {
            let keys = sample_keys(n, 0x0a + n as u64);
            let (filter, _) =
                Xor8::construct_with(&keys, 100, &mut SplitMix64::new(12)).unwrap();
            for &key in &keys {
                assert!(filter.contains(key), "lost key {key} at n = {n}");
            }
        }
    }

    #[test]
    fn slots_stay_in_their_blocks() {
        let block_length = array_length(10_000) / 3;
        let mut rng = SplitMix64::new(13);
        for _ in 0..100_000 {
            let slots = locations(rng.next(), block_length);
            let slots = slots.as_slice();
            assert_eq!(slots.len(), 3);
            for (block, &slot) in slots.iter().enumerate() {
                assert!(slot >= block * block_length && slot < (block + 1) * block_length);
            }
        }
    }

    #[test]
    fn first_attempts_mostly_succeed() {
        // The slot budget gives each attempt > 90% success probability;
        // with 200 rounds, 30 retries would be far outside that regime.
        let mut rng = SplitMix64::new(14);
        let mut retried = 0u32;
        let rounds = 200;
        for round in 0..rounds {
            let keys = sample_keys(10_000, 0xd1ce + round);
            let (_, report) = Xor8::construct_with(&keys, 100, &mut rng).unwrap();
            retried += u32::from(report.attempts > 1);
        }
        assert!(retried <= 30, "{retried} of {rounds} constructions retried");
    }

    #[test]
    fn sixteen_bit_variant_keeps_members() {
        let keys = sample_keys(5_000, 0x16bb);
        let (filter, _) = Xor16::construct_with(&keys, 100, &mut SplitMix64::new(15)).unwrap();
        assert!(keys.iter().all(|&k| filter.contains(k)));
    }

    #[test]
    fn duplicate_keys_are_reported_distinctly() {
        let mut keys = sample_keys(500, 0xdd_u64);
        keys[17] = keys[400];
        let err = Xor8::construct_with(&keys, 100, &mut SplitMix64::new(16)).unwrap_err();
        assert_eq!(err, Error::DuplicateKeys);
    }
}
