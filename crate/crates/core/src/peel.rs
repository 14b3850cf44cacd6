//! Peeling machinery shared by the fuse and xor constructions.

use rand::RngCore;

use crate::Error;
use crate::fuse::ConstructionReport;
use crate::hashing::{Fingerprint, HashValue, Locations, Seed};

/// Per-cell bookkeeping for one construction attempt.
///
/// `counts[i]` is the number of keys occupying cell `i` and `masks[i]` the
/// xor of their hashes, so a cell holding exactly one key exposes that key's
/// hash directly. Peeling repeatedly removes such singleton cells; the
/// removal order doubles as the assignment order.
pub(crate) struct PeelingState {
    counts: Vec<u32>,
    masks: Vec<u64>,
    queue: Vec<usize>,
    order: Vec<(u64, usize)>,
}

impl PeelingState {
    pub fn new(cells: usize, keys: usize) -> Self {
        Self {
            counts: vec![0; cells],
            masks: vec![0; cells],
            queue: Vec::with_capacity(cells.min(keys)),
            order: Vec::with_capacity(keys),
        }
    }

    pub fn reset(&mut self) {
        self.counts.fill(0);
        self.masks.fill(0);
        self.queue.clear();
        self.order.clear();
    }

    #[inline]
    pub fn add(&mut self, h: u64, slots: &[usize]) {
        for &slot in slots {
            self.counts[slot] += 1;
            self.masks[slot] ^= h;
        }
    }

    /// Peels until no singleton cell remains and returns the number of keys
    /// removed; construction succeeded when that equals the key count.
    pub fn peel(&mut self, locate: impl Fn(u64) -> Locations) -> usize {
        for (cell, &count) in self.counts.iter().enumerate() {
            if count == 1 {
                self.queue.push(cell);
            }
        }
        while let Some(cell) = self.queue.pop() {
            if self.counts[cell] != 1 {
                continue;
            }
            let h = self.masks[cell];
            self.order.push((h, cell));
            for &slot in locate(h).as_slice() {
                self.counts[slot] -= 1;
                self.masks[slot] ^= h;
                if self.counts[slot] == 1 {
                    self.queue.push(slot);
                }
            }
        }
        self.order.len()
    }

    pub fn order(&self) -> &[(u64, usize)] {
        &self.order
    }
}

/// Unwinds a peeling order into the fingerprint array: walking the order
/// backward, each key's own cell is set so the xor over all its slots equals
/// its fingerprint.
pub(crate) fn assign<F: Fingerprint>(
    order: &[(u64, usize)],
    array_length: usize,
    locate: impl Fn(u64) -> Locations,
) -> Vec<F> {
    let mut fingerprints = vec![F::default(); array_length];
    for &(h, cell) in order.iter().rev() {
        let mut value = F::from_hash(HashValue::new(h));
        for &slot in locate(h).as_slice() {
            if slot != cell {
                value ^= fingerprints[slot];
            }
        }
        fingerprints[cell] = value;
    }
    fingerprints
}

/// One filter family's construction attempt, drivable by [`drive`].
pub(crate) trait Attempts {
    type Output;

    fn attempt(&mut self, seed: Seed) -> Option<Self::Output>;

    /// Whether the most recent attempt's hashed keys contain a repeat.
    fn has_duplicate_hashes(&self) -> bool;
}

/// After this many consecutive failures the input is checked for repeated
/// keys, which make peeling impossible at any seed.
const DUPLICATE_CHECK_INTERVAL: u32 = 10;

/// Runs construction attempts under fresh seeds until one succeeds, the
/// input is found degenerate, or the attempt budget runs out.
pub(crate) fn drive<A: Attempts>(
    source: &mut A,
    max_attempts: u32,
    rng: &mut impl RngCore,
) -> Result<(A::Output, ConstructionReport), Error> {
    let max_attempts = max_attempts.max(1);
    for attempt in 1..=max_attempts {
        let seed = Seed::fresh(rng);
        if let Some(output) = source.attempt(seed) {
            let report = ConstructionReport {
                attempts: attempt,
                success: true,
                final_seed: seed,
            };
            return Ok((output, report));
        }
        if attempt % DUPLICATE_CHECK_INTERVAL == 0 && source.has_duplicate_hashes() {
            return Err(Error::DuplicateKeys);
        }
    }
    Err(Error::ConstructionFailed {
        attempts: max_attempts,
    })
}

/// Sorted-scan duplicate check over one attempt's hashed keys. A duplicate
/// hash at some seed almost surely means a duplicate input key; honest
/// collisions dissolve under the next seed, repeated keys do not.
pub(crate) fn contains_duplicates(hashes: &[u64]) -> bool {
    let mut sorted = hashes.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|pair| pair[0] == pair[1])
}
