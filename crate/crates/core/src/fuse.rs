//! Binary fuse filters.
//!
//! Construction follows the peeling scheme over segmented arrays: hash every
//! key, partially sort the hashes by start segment, count cell occupancy,
//! then repeatedly remove keys that sit alone in some cell. When all keys
//! peel, unwinding the removal order fills the fingerprint array; otherwise
//! the attempt is retried under a fresh seed. The partial sort keeps each
//! key's slots inside a small moving window of segments, which is where the
//! construction-speed advantage over plain xor filters comes from.

use rand::RngCore;

use crate::Error;
use crate::hashing::{self, Fingerprint, HashValue, Seed};
use crate::layout::{Arity, FilterLayout};
use crate::peel::{self, Attempts, PeelingState};

/// How a construction ended: attempt count and the seed that worked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstructionReport {
    /// Attempts consumed, counting the successful one.
    pub attempts: u32,
    pub success: bool,
    /// Seed of the successful attempt. Constructing again with this seed
    /// reproduces the filter bit for bit.
    pub final_seed: Seed,
}

/// Retry budget used by the plain constructors.
pub const DEFAULT_MAX_ATTEMPTS: u32 = 100;

/// A binary fuse filter over a fixed key set.
///
/// `contains` answers true for every construction key; for other keys it
/// answers true with probability about 2^-k, where k is the fingerprint
/// width. The filter is immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuseFilter<F> {
    seed: Seed,
    layout: FilterLayout,
    fingerprints: Vec<F>,
}

/// Binary fuse filter with 8-bit fingerprints.
pub type Fuse8 = FuseFilter<u8>;
/// Binary fuse filter with 16-bit fingerprints.
pub type Fuse16 = FuseFilter<u16>;

impl<F: Fingerprint> FuseFilter<F> {
    /// Builds a filter over `keys`, which must be distinct, drawing seeds
    /// from the thread RNG.
    pub fn construct(keys: &[u64], arity: Arity) -> Result<(Self, ConstructionReport), Error> {
        Self::construct_with(keys, arity, DEFAULT_MAX_ATTEMPTS, &mut rand::rng())
    }

    /// [`construct`](Self::construct) with an explicit attempt budget and
    /// seed source; deterministic for a deterministic `rng`.
    pub fn construct_with(
        keys: &[u64],
        arity: Arity,
        max_attempts: u32,
        rng: &mut impl RngCore,
    ) -> Result<(Self, ConstructionReport), Error> {
        let layout = FilterLayout::compute(keys.len(), arity);
        let mut builder = Builder::new(keys, layout);
        let (fingerprints, report) = peel::drive(&mut builder, max_attempts, rng)?;
        Ok((
            FuseFilter {
                seed: report.final_seed,
                layout,
                fingerprints,
            },
            report,
        ))
    }

    /// Single construction attempt at a fixed seed. Fails with
    /// [`Error::ConstructionFailed`] if that seed does not peel.
    pub fn construct_with_seed(
        keys: &[u64],
        arity: Arity,
        seed: Seed,
    ) -> Result<(Self, ConstructionReport), Error> {
        let layout = FilterLayout::compute(keys.len(), arity);
        let mut builder = Builder::new(keys, layout);
        match builder.attempt(seed) {
            Some(fingerprints) => Ok((
                FuseFilter {
                    seed,
                    layout,
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
        match self.layout.arity() {
            Arity::Three => {
                let [a, b, c] = hashing::windows::<3>(h, &self.layout);
                acc ^= self.fingerprints[a];
                acc ^= self.fingerprints[b];
                acc ^= self.fingerprints[c];
            }
            Arity::Four => {
                let [a, b, c, d] = hashing::windows::<4>(h, &self.layout);
                acc ^= self.fingerprints[a];
                acc ^= self.fingerprints[b];
                acc ^= self.fingerprints[c];
                acc ^= self.fingerprints[d];
            }
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

    pub fn layout(&self) -> &FilterLayout {
        &self.layout
    }

    pub fn fingerprints(&self) -> &[F] {
        &self.fingerprints
    }

    pub(crate) fn from_parts(seed: Seed, layout: FilterLayout, fingerprints: Vec<F>) -> Self {
        debug_assert_eq!(fingerprints.len(), layout.array_length());
        FuseFilter {
            seed,
            layout,
            fingerprints,
        }
    }
}

/// Reusable buffers for one filter's construction attempts.
struct Builder<'k, F> {
    keys: &'k [u64],
    layout: FilterLayout,
    hashed: Vec<u64>,
    sorted: Vec<u64>,
    // Cursor array for the counting sort, one slot per start segment plus a
    // leading zero.
    cursors: Vec<usize>,
    state: PeelingState,
    _fingerprint: std::marker::PhantomData<F>,
}

impl<'k, F: Fingerprint> Builder<'k, F> {
    fn new(keys: &'k [u64], layout: FilterLayout) -> Self {
        Self {
            keys,
            layout,
            hashed: vec![0; keys.len()],
            sorted: vec![0; keys.len()],
            cursors: vec![0; layout.start_segment_count() + 1],
            state: PeelingState::new(layout.array_length(), keys.len()),
            _fingerprint: std::marker::PhantomData,
        }
    }

    /// Counting sort of `hashed` into `sorted`, keyed by start segment.
    fn sort_by_start_segment(&mut self) {
        let layout = &self.layout;
        self.cursors.fill(0);
        for &h in &self.hashed {
            self.cursors[1 + hashing::start_segment(HashValue::new(h), layout)] += 1;
        }
        for i in 1..self.cursors.len() {
            self.cursors[i] += self.cursors[i - 1];
        }
        for &h in &self.hashed {
            let bucket = hashing::start_segment(HashValue::new(h), layout);
            self.sorted[self.cursors[bucket]] = h;
            self.cursors[bucket] += 1;
        }
    }
}

impl<F: Fingerprint> Attempts for Builder<'_, F> {
    type Output = Vec<F>;

    fn attempt(&mut self, seed: Seed) -> Option<Vec<F>> {
        for (slot, &key) in self.hashed.iter_mut().zip(self.keys) {
            *slot = hashing::mix64(key, seed).value();
        }
        self.sort_by_start_segment();

        let layout = self.layout;
        let locate = |h: u64| hashing::segment_locations(HashValue::new(h), &layout);
        self.state.reset();
        for &h in &self.sorted {
            self.state.add(h, locate(h).as_slice());
        }
        if self.state.peel(locate) < self.keys.len() {
            return None;
        }
        Some(peel::assign(
            self.state.order(),
            layout.array_length(),
            locate,
        ))
    }

    fn has_duplicate_hashes(&self) -> bool {
        peel::contains_duplicates(&self.hashed)
    }
}
