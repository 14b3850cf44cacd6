//! Key mixing and the mapping from mixed hashes to filter slots.
//!
//! Every filter in this crate hashes a key exactly once per operation. All
//! slot indexes and fingerprint bits are then cut out of that single 64-bit
//! value, so the bit-field plan below is load-bearing:
//!
//! * the start segment comes from a multiply-shift reduction, which is
//!   dominated by the top bits of the hash;
//! * within-segment offsets are disjoint shifted windows taken from bit 0
//!   upward, never reaching past bit 47; when the windows would spill higher
//!   (only for large segments at arity 4, or 128Ki+ segments at arity 3) the
//!   remaining offsets switch to a remixed copy of the hash;
//! * the fingerprint xor-folds the high half onto the low half. Its raw bits
//!   overlap the offset windows, but the fold is the second mixing step that
//!   keeps it decorrelated from every location field.

use rand::RngCore;

use crate::Error;
use crate::layout::{Arity, FilterLayout};

/// Hashing seed of one construction attempt, stored in the finished filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(u64);

impl Seed {
    pub fn new(value: u64) -> Self {
        Self(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    /// Draws a fresh seed for the next construction attempt.
    pub fn fresh(rng: &mut impl RngCore) -> Self {
        Self(rng.next_u64())
    }
}

/// A mixed key. Filters index and fingerprint bit-fields of this value,
/// never of the raw key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashValue(u64);

impl HashValue {
    pub fn new(value: u64) -> Self {
        Self(value)
    }

    pub fn value(self) -> u64 {
        self.0
    }
}

/// Murmur-style 64-bit finalizer: two xorshift/multiply rounds and a final
/// xorshift, giving full avalanche on a 64-bit word.
#[inline]
pub(crate) const fn murmur_mix(mut h: u64) -> u64 {
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h = h.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    h ^= h >> 33;
    h
}

/// Mixes a key under a seed.
#[inline]
pub fn mix64(key: u64, seed: Seed) -> HashValue {
    HashValue(murmur_mix(key ^ seed.0))
}

#[inline]
pub(crate) const fn fold(h: u64) -> u64 {
    h ^ (h >> 32)
}

/// The `bits`-bit fingerprint of a mixed key; `bits` must be 8 or 16.
pub fn fingerprint(h: HashValue, bits: u32) -> Result<u16, Error> {
    match bits {
        8 => Ok(u16::from(u8::from_hash(h))),
        16 => Ok(u16::from_hash(h)),
        _ => Err(Error::UnsupportedFingerprintBits(bits)),
    }
}

/// Storage word for fingerprints. The two implementations, `u8` and `u16`,
/// are the supported widths; `from_hash` agrees with [`fingerprint`].
pub trait Fingerprint:
    Copy + Default + Eq + std::fmt::Debug + std::ops::BitXorAssign + Send + Sync + 'static
{
    const BITS: u32;

    fn from_hash(h: HashValue) -> Self;
}

impl Fingerprint for u8 {
    const BITS: u32 = 8;

    #[inline]
    fn from_hash(h: HashValue) -> Self {
        fold(h.0) as u8
    }
}

impl Fingerprint for u16 {
    const BITS: u32 = 16;

    #[inline]
    fn from_hash(h: HashValue) -> Self {
        fold(h.0) as u16
    }
}

/// Maps a 32-bit value onto `[0, range)` with a multiply-shift, avoiding the
/// modulo of classic bucketing.
#[inline]
pub fn reduce32(x: u32, range: u32) -> u32 {
    ((u64::from(x) * u64::from(range)) >> 32) as u32
}

/// 64-bit variant of [`reduce32`].
#[inline]
pub fn reduce64(x: u64, range: u64) -> u64 {
    ((u128::from(x) * u128::from(range)) >> 64) as u64
}

/// Slot indexes of one key, at most four.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Locations {
    slots: [usize; 4],
    len: usize,
}

impl Locations {
    #[inline]
    pub(crate) fn new(slots: [usize; 4], len: usize) -> Self {
        Self { slots, len }
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.slots[..self.len]
    }
}

/// Offset windows may use bits 0..48 of the primary hash; the bits above
/// stay reserved for the start-segment reduction.
const OFFSET_WINDOW_BITS: u32 = 48;

#[inline]
fn remix(h: u64) -> u64 {
    murmur_mix(h.rotate_left(32))
}

/// Start segment of a mixed key, in `[0, start_segment_count)`.
#[inline]
pub(crate) fn start_segment(h: HashValue, layout: &FilterLayout) -> usize {
    reduce64(h.0, layout.start_segment_count() as u64) as usize
}

/// The slots a key occupies under a fuse layout: one per segment, in `arity`
/// consecutive segments starting at [`start_segment`].
#[inline]
pub fn segment_locations(h: HashValue, layout: &FilterLayout) -> Locations {
    match layout.arity() {
        Arity::Three => {
            let [a, b, c] = windows::<3>(h, layout);
            Locations::new([a, b, c, 0], 3)
        }
        Arity::Four => Locations::new(windows::<4>(h, layout), 4),
    }
}

/// Slot mapping specialized by arity so the query path stays fully unrolled.
/// Forced inlining matters: an out-of-line call here returns the slot array
/// through the stack and costs a third of the query time.
///
/// Whether any window spills past the bit cap depends only on the layout, so
/// the spill handling lives behind one layout-level branch; otherwise the
/// compiler if-converts the per-slot check and every query computes the remix
/// it will never use.
#[inline(always)]
pub(crate) fn windows<const ARITY: usize>(h: HashValue, layout: &FilterLayout) -> [usize; ARITY] {
    let segment_length = layout.segment_length();
    let log_len = segment_length.trailing_zeros();
    if ARITY as u32 * log_len > OFFSET_WINDOW_BITS {
        return windows_spill(h, layout);
    }

    let mask = (segment_length - 1) as u64;
    let mut slots = [0usize; ARITY];
    let mut base = start_segment(h, layout) << log_len;
    let mut shift = 0u32;
    for slot in &mut slots {
        *slot = base + ((h.0 >> shift) & mask) as usize;
        base += segment_length;
        shift += log_len;
    }
    slots
}

/// General form of the mapping, the one place the remix spill is defined.
/// Reached only for segment lengths of 2^17 up at arity 3, 2^13 up at
/// arity 4; equivalence with the straight-line path is pinned by test.
#[cold]
fn windows_spill<const ARITY: usize>(h: HashValue, layout: &FilterLayout) -> [usize; ARITY] {
    let segment_length = layout.segment_length();
    let mask = (segment_length - 1) as u64;
    let log_len = segment_length.trailing_zeros();

    let mut slots = [0usize; ARITY];
    let mut base = start_segment(h, layout) << log_len;
    let mut source = h.0;
    let mut shift = 0u32;
    let mut remixed = false;
    for slot in &mut slots {
        if !remixed && shift + log_len > OFFSET_WINDOW_BITS {
            source = remix(h.0);
            shift = 0;
            remixed = true;
        }
        *slot = base + ((source >> shift) & mask) as usize;
        base += segment_length;
        shift += log_len;
    }
    slots
}
