//! Classic Bloom filter baseline.
//!
//! One 64-bit mix per key, split into two 32-bit halves that feed a double
//! hashing scheme: probe i reads bit `reduce32(h1 + i * h2, m)`. Keys are
//! hashed in small batches during bulk loading so the hashing work and the
//! scattered bit stores do not interleave per key.

use crate::Error;
use crate::hashing::{self, Seed};

const HASH_BATCH: usize = 256;

/// A Bloom filter over 64-bit keys; supports incremental insertion, unlike
/// the fingerprint filters in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BloomFilter {
    seed: Seed,
    hash_count: u32,
    bit_len: usize,
    words: Vec<u64>,
}

impl BloomFilter {
    /// Allocates a filter for `n` keys at `bits_per_key`, rounded up to
    /// whole 64-bit words (at least one, so queries on an empty filter are
    /// well defined).
    pub fn new(n: usize, bits_per_key: f64, hash_count: u32, seed: Seed) -> Self {
        assert!(bits_per_key > 0.0, "bits per key must be positive");
        assert!(hash_count >= 1, "need at least one probe per key");
        let bit_len = ((n as f64 * bits_per_key).ceil() as usize)
            .next_multiple_of(64)
            .max(64);
        BloomFilter {
            seed,
            hash_count,
            bit_len,
            words: vec![0; bit_len / 64],
        }
    }

    /// [`new`](Self::new) with the hash count that minimizes the false
    /// positive rate for the given budget.
    pub fn with_optimal_hash_count(n: usize, bits_per_key: f64, seed: Seed) -> Self {
        Self::new(n, bits_per_key, Self::optimal_hash_count(bits_per_key), seed)
    }

    /// round(bits_per_key * ln 2), at least 1.
    pub fn optimal_hash_count(bits_per_key: f64) -> u32 {
        ((bits_per_key * std::f64::consts::LN_2).round() as u32).max(1)
    }

    #[inline]
    fn probes(&self, h: u64) -> impl Iterator<Item = (usize, u64)> + '_ {
        let h1 = h as u32;
        let h2 = (h >> 32) as u32;
        let bit_len = self.bit_len as u64;
        (0..self.hash_count).map(move |i| {
            let g = h1.wrapping_add(i.wrapping_mul(h2));
            let bit = (u64::from(g) * bit_len) >> 32;
            ((bit >> 6) as usize, 1u64 << (bit & 63))
        })
    }

    #[inline]
    fn set_bits(&mut self, h: u64) {
        let h1 = h as u32;
        let h2 = (h >> 32) as u32;
        let bit_len = self.bit_len as u64;
        for i in 0..self.hash_count {
            let g = h1.wrapping_add(i.wrapping_mul(h2));
            let bit = (u64::from(g) * bit_len) >> 32;
            self.words[(bit >> 6) as usize] |= 1u64 << (bit & 63);
        }
    }

    pub fn add(&mut self, key: u64) {
        self.set_bits(hashing::mix64(key, self.seed).value());
    }

    /// Bulk insertion, hashing `HASH_BATCH` keys ahead of the bit stores.
    pub fn populate(&mut self, keys: &[u64]) {
        let mut hashes = [0u64; HASH_BATCH];
        for chunk in keys.chunks(HASH_BATCH) {
            let hashes = &mut hashes[..chunk.len()];
            for (slot, &key) in hashes.iter_mut().zip(chunk) {
                *slot = hashing::mix64(key, self.seed).value();
            }
            for &h in hashes.iter() {
                self.set_bits(h);
            }
        }
    }

    pub fn contains(&self, key: u64) -> bool {
        let h = hashing::mix64(key, self.seed).value();
        self.probes(h)
            .all(|(word, mask)| self.words[word] & mask != 0)
    }

    /// Number of set bits, for load accounting.
    pub fn ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Storage cost in bits per key for a set of `n` keys.
    pub fn bits_per_key(&self, n: usize) -> Result<f64, Error> {
        if n == 0 {
            return Err(Error::UndefinedBitsPerKey);
        }
        Ok(self.bit_len as f64 / n as f64)
    }

    pub fn seed(&self) -> Seed {
        self.seed
    }

    pub fn hash_count(&self) -> u32 {
        self.hash_count
    }

    /// Bit array length m, always a multiple of 64.
    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_parts(seed: Seed, hash_count: u32, bit_len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len() * 64, bit_len);
        BloomFilter {
            seed,
            hash_count,
            bit_len,
            words,
        }
    }
}
