//! Array geometry for fuse filters.

use crate::Error;

/// How many slots each key occupies: one per consecutive segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    Three,
    Four,
}

impl Arity {
    #[inline]
    pub fn slots(self) -> usize {
        match self {
            Arity::Three => 3,
            Arity::Four => 4,
        }
    }
}

/// Upper bound on the segment length. 2^18 keeps every within-segment offset
/// window inside the hash bit budget of `segment_locations`.
pub const MAX_SEGMENT_LENGTH: usize = 1 << 18;

/// Geometry of a fuse filter's slot array.
///
/// The array is split into equally sized power-of-two segments. A key picks a
/// start segment out of the first `start_segment_count` and occupies one slot
/// in each of `arity` consecutive segments from there, so the total segment
/// count is `start_segment_count + arity - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterLayout {
    arity: Arity,
    segment_length: usize,
    start_segment_count: usize,
    array_length: usize,
}

impl FilterLayout {
    /// Sizes the array for `n` keys.
    ///
    /// Segment length grows as a tuned power of the set size and the raw
    /// slot budget shrinks toward 1.125n (arity 3) or 1.075n (arity 4) as n
    /// grows; small sets pay a larger relative reserve. The raw budget is
    /// then rounded up to whole segments, with at least `arity` segments so
    /// every key has a full window of consecutive segments to land in.
    pub fn compute(n: usize, arity: Arity) -> Self {
        let slots = arity.slots();
        let (segment_length, raw_size) = if n <= 1 {
            // log n is useless at n <= 1; fall back to the smallest geometry.
            (4, slots.max(n * 2))
        } else {
            let ln_n = (n as f64).ln();
            let (exponent, factor) = match arity {
                Arity::Three => (
                    ln_n / 3.33_f64.ln() + 2.25,
                    0.875 + 0.25 * (1e6_f64.ln() / ln_n).max(1.0),
                ),
                Arity::Four => (
                    ln_n / 2.91_f64.ln() - 0.5,
                    0.77 + 0.305 * (6e5_f64.ln() / ln_n).max(1.0),
                ),
            };
            // Floor, not round: the constants are tuned against the floored
            // exponent and rounding shifts the failure rates. The lower
            // clamp matches the n <= 1 geometry; without it a handful of
            // tiny arity-4 sizes would shrink below their predecessors.
            let segment_length =
                (1usize << exponent.max(0.0).floor() as u32).clamp(4, MAX_SEGMENT_LENGTH);
            (segment_length, (factor * n as f64).floor() as usize)
        };
        let segment_count = raw_size.div_ceil(segment_length).max(slots);
        FilterLayout {
            arity,
            segment_length,
            start_segment_count: segment_count - (slots - 1),
            array_length: segment_count * segment_length,
        }
    }

    /// Rebuilds a layout from stored fields, enforcing every invariant
    /// `compute` guarantees.
    pub(crate) fn from_parts(
        arity: Arity,
        segment_length: u64,
        start_segment_count: u64,
    ) -> Result<Self, Error> {
        if segment_length < 4
            || !segment_length.is_power_of_two()
            || segment_length > MAX_SEGMENT_LENGTH as u64
        {
            return Err(Error::InvalidHeader("segment length out of range"));
        }
        if start_segment_count == 0 {
            return Err(Error::InvalidHeader("start segment count must be positive"));
        }
        let slots = arity.slots() as u64;
        let array_length = start_segment_count
            .checked_add(slots - 1)
            .and_then(|segments| segments.checked_mul(segment_length))
            .and_then(|len| usize::try_from(len).ok())
            .ok_or(Error::InvalidHeader("array length overflows"))?;
        Ok(FilterLayout {
            arity,
            segment_length: segment_length as usize,
            start_segment_count: start_segment_count as usize,
            array_length,
        })
    }

    #[inline]
    pub fn arity(&self) -> Arity {
        self.arity
    }

    #[inline]
    pub fn segment_length(&self) -> usize {
        self.segment_length
    }

    #[inline]
    pub fn start_segment_count(&self) -> usize {
        self.start_segment_count
    }

    #[inline]
    pub fn array_length(&self) -> usize {
        self.array_length
    }

    pub fn segment_count(&self) -> usize {
        self.start_segment_count + self.arity.slots() - 1
    }

    /// Array length over segment length. The segmented construction needs
    /// this ratio to grow with n for its space advantage to materialize.
    pub fn segment_ratio(&self) -> f64 {
        self.array_length as f64 / self.segment_length as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_geometry_for_a_million_keys_arity_three() {
        // Hand-evaluated: segment length 2^13, raw size
        // floor((0.875 + 0.25) * 10^6) = 1 125 000, rounded up to 138
        // segments of 8192.
        let layout = FilterLayout::compute(1_000_000, Arity::Three);
        assert_eq!(layout.segment_length(), 8192);
        assert_eq!(layout.array_length(), 1_130_496);
        assert_eq!(layout.segment_count(), 138);
        assert_eq!(layout.start_segment_count(), 136);
        assert!((layout.segment_ratio() - 138.0).abs() < 1e-9);
        // 8-bit fingerprints: 1 130 496 * 8 / 10^6 bits per key.
        let bits_per_key = layout.array_length() as f64 * 8.0 / 1e6;
        assert!((bits_per_key - 9.043968).abs() < 1e-9);
    }

    #[test]
    fn frozen_geometry_for_a_million_keys_arity_four() {
        // Hand-evaluated: segment length 2^12, raw size
        // floor((0.77 + 0.305) * 10^6) = 1 075 000, rounded up to 263
        // segments of 4096.
        let layout = FilterLayout::compute(1_000_000, Arity::Four);
        assert_eq!(layout.segment_length(), 4096);
        assert_eq!(layout.array_length(), 1_077_248);
        assert_eq!(layout.segment_count(), 263);
        assert_eq!(layout.start_segment_count(), 260);
        let bits_per_key = layout.array_length() as f64 * 8.0 / 1e6;
        assert!((bits_per_key - 8.617984).abs() < 1e-9);
    }

    #[test]
    fn frozen_geometry_small_sets() {
        // n = 10^4, arity 3: segment length 512, raw 12 500 -> 25 segments.
        let layout = FilterLayout::compute(10_000, Arity::Three);
        assert_eq!(layout.segment_length(), 512);
        assert_eq!(layout.array_length(), 12_800);
        assert_eq!(layout.start_segment_count(), 23);
        // n = 10^4, arity 4: segment length 256, raw 12 106 -> 48 segments.
        let layout = FilterLayout::compute(10_000, Arity::Four);
        assert_eq!(layout.segment_length(), 256);
        assert_eq!(layout.array_length(), 12_288);
        assert_eq!(layout.start_segment_count(), 45);
    }

    #[test]
    fn degenerate_sizes_get_the_minimal_geometry() {
        for n in [0, 1] {
            let layout = FilterLayout::compute(n, Arity::Three);
            assert_eq!(layout.segment_length(), 4);
            assert_eq!(layout.array_length(), 12);
            assert_eq!(layout.start_segment_count(), 1);

            let layout = FilterLayout::compute(n, Arity::Four);
            assert_eq!(layout.segment_length(), 4);
            assert_eq!(layout.array_length(), 16);
            assert_eq!(layout.start_segment_count(), 1);
        }
    }

    #[test]
    fn layout_invariants_hold_over_a_log_sweep() {
        let mut sizes = vec![0usize, 1, 2, 3];
        for exponent in 0..=70 {
            sizes.push((10f64.powf(exponent as f64 / 10.0)) as usize);
        }
        sizes.sort_unstable();
        for arity in [Arity::Three, Arity::Four] {
            let mut previous = 0usize;
            for &n in &sizes {
                let layout = FilterLayout::compute(n, arity);
                let slots = arity.slots();
                assert!(layout.segment_length().is_power_of_two());
                assert!(layout.start_segment_count() >= 1);
                assert_eq!(
                    layout.array_length(),
                    layout.segment_count() * layout.segment_length()
                );
                assert!(layout.segment_count() >= slots);
                assert!(
                    layout.array_length() >= previous,
                    "array length shrank between sizes near {n} ({arity:?})"
                );
                previous = layout.array_length();
            }
        }
    }

    #[test]
    fn asymptotic_space_overhead_is_bounded() {
        for exponent in 60..=70 {
            let n = (10f64.powf(exponent as f64 / 10.0)) as usize;
            let three = FilterLayout::compute(n, Arity::Three);
            let four = FilterLayout::compute(n, Arity::Four);
            assert!(
                three.array_length() as f64 / n as f64 <= 1.135,
                "arity 3 overhead too high at n = {n}"
            );
            assert!(
                four.array_length() as f64 / n as f64 <= 1.085,
                "arity 4 overhead too high at n = {n}"
            );
        }
    }

    #[test]
    fn segment_ratio_grows_with_n() {
        let small = FilterLayout::compute(10_000, Arity::Three);
        let large = FilterLayout::compute(1_000_000, Arity::Three);
        assert!(large.segment_ratio() > small.segment_ratio());
    }

    #[test]
    fn from_parts_round_trips_and_validates() {
        let layout = FilterLayout::compute(1_000_000, Arity::Three);
        let rebuilt = FilterLayout::from_parts(
            Arity::Three,
            layout.segment_length() as u64,
            layout.start_segment_count() as u64,
        )
        .unwrap();
        assert_eq!(rebuilt, layout);

        assert!(FilterLayout::from_parts(Arity::Three, 0, 1).is_err());
        assert!(FilterLayout::from_parts(Arity::Three, 2, 1).is_err());
        assert!(FilterLayout::from_parts(Arity::Three, 48, 1).is_err());
        assert!(FilterLayout::from_parts(Arity::Three, 1 << 20, 1).is_err());
        assert!(FilterLayout::from_parts(Arity::Four, 8192, 0).is_err());
    }
}
