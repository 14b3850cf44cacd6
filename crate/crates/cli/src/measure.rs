//! Construction timing, query timing, and FPP measurement.
//!
//! Timed regions follow one discipline: an untimed warm-up first, then each
//! repetition loops until at least [`MIN_TIMED_SECONDS`] of cumulative wall
//! time, and the reported figure is the median across repetitions. The warm-up
//! keeps first-touch page faults out of the numbers; the 0.1 s floor keeps
//! timer granularity noise out.

use crate::config::{BenchConfig, Bits};
use crate::dataset::QuerySet;
use binfuse::{
    AnyFilter, Arity, BloomFilter, DEFAULT_MAX_ATTEMPTS, Error, FilterKind, FuseFilter, Seed,
    SplitMix64, XorFilter,
};
use std::collections::HashSet;
use std::time::Instant;

const MIN_TIMED_SECONDS: f64 = 0.1;

/// Reported per-key timings must land in this window; values outside it mean
/// the timer is being misused, not that the filter is slow.
const SANITY_NS_PER_KEY: std::ops::Range<f64> = 0.1..10_000.0;

pub struct BuiltFilter {
    pub filter: AnyFilter,
    pub attempts: u32,
}

/// Constructs the configured filter over `keys`, seeded from the config's
/// filter stream so a rerun rebuilds the identical filter.
pub fn build_filter(config: &BenchConfig, keys: &[u64]) -> Result<BuiltFilter, Error> {
    build_once(config, keys, config.stream_seeds().filter)
}

fn build_once(config: &BenchConfig, keys: &[u64], filter_seed: u64) -> Result<BuiltFilter, Error> {
    let mut rng = SplitMix64::new(filter_seed);
    let built = match (config.kind, config.bits) {
        (FilterKind::Fuse3 | FilterKind::Fuse4, Bits::Fingerprint(bits)) => {
            let arity = if config.kind == FilterKind::Fuse3 {
                Arity::Three
            } else {
                Arity::Four
            };
            match bits {
                8 => {
                    let (f, r) =
                        FuseFilter::<u8>::construct_with(keys, arity, DEFAULT_MAX_ATTEMPTS, &mut rng)?;
                    BuiltFilter {
                        filter: f.into(),
                        attempts: r.attempts,
                    }
                }
                16 => {
                    let (f, r) =
                        FuseFilter::<u16>::construct_with(keys, arity, DEFAULT_MAX_ATTEMPTS, &mut rng)?;
                    BuiltFilter {
                        filter: f.into(),
                        attempts: r.attempts,
                    }
                }
                other => return Err(Error::UnsupportedFingerprintBits(other)),
            }
        }
        (FilterKind::Xor, Bits::Fingerprint(bits)) => match bits {
            8 => {
                let (f, r) = XorFilter::<u8>::construct_with(keys, DEFAULT_MAX_ATTEMPTS, &mut rng)?;
                BuiltFilter {
                    filter: f.into(),
                    attempts: r.attempts,
                }
            }
            16 => {
                let (f, r) = XorFilter::<u16>::construct_with(keys, DEFAULT_MAX_ATTEMPTS, &mut rng)?;
                BuiltFilter {
                    filter: f.into(),
                    attempts: r.attempts,
                }
            }
            other => return Err(Error::UnsupportedFingerprintBits(other)),
        },
        (FilterKind::Bloom, Bits::PerKey(bits_per_key)) => {
            let mut bloom =
                BloomFilter::with_optimal_hash_count(keys.len(), bits_per_key, Seed::new(filter_seed));
            bloom.populate(keys);
            BuiltFilter {
                filter: bloom.into(),
                attempts: 1,
            }
        }
        (kind, bits) => unreachable!("validated config pairs {kind:?} with {bits:?}"),
    };
    Ok(built)
}

/// Median construction cost in nanoseconds per key.
pub fn time_construction(config: &BenchConfig, keys: &[u64]) -> Result<f64, Error> {
    assert!(!keys.is_empty(), "per-key timing needs at least one key");
    let filter_seed = config.stream_seeds().filter;

    build_once(config, keys, filter_seed)?;

    let mut samples = Vec::with_capacity(config.repetitions as usize);
    for _ in 0..config.repetitions {
        let mut builds = 0u32;
        let started = Instant::now();
        let mut elapsed = 0.0;
        while elapsed < MIN_TIMED_SECONDS {
            std::hint::black_box(build_once(config, keys, filter_seed)?);
            builds += 1;
            elapsed = started.elapsed().as_secs_f64();
        }
        samples.push(elapsed * 1e9 / (f64::from(builds) * keys.len() as f64));
    }
    let ns_per_key = median(&mut samples);
    assert!(
        SANITY_NS_PER_KEY.contains(&ns_per_key),
        "implausible construction timing: {ns_per_key} ns/key"
    );
    Ok(ns_per_key)
}

pub struct QueryTiming {
    pub ns_per_query: f64,
    /// Positive answers in one pass over the query set; consumed by callers
    /// so the timed loop cannot be optimized away.
    pub match_count: usize,
    pub false_positives: usize,
    pub non_member_count: usize,
}

impl QueryTiming {
    /// Positive rate over the labeled non-members, if there are any.
    pub fn measured_fpp(&self) -> Option<f64> {
        (self.non_member_count > 0)
            .then(|| self.false_positives as f64 / self.non_member_count as f64)
    }
}

/// A non-inlined membership call, so the timed loop pays a call per probe the
/// way a real lookup site would.
#[inline(never)]
fn contains_query(filter: &AnyFilter, key: u64) -> bool {
    filter.contains(key)
}

/// Median query cost in nanoseconds per probe, plus the answer tallies from
/// the ground-truth pass.
pub fn time_queries(filter: &AnyFilter, queries: &QuerySet, repetitions: u32) -> QueryTiming {
    assert!(!queries.is_empty(), "per-query timing needs probes");

    // Warm-up doubles as the ground-truth pass: every member must be found.
    let mut match_count = 0usize;
    let mut false_positives = 0usize;
    let mut non_member_count = 0usize;
    for (&key, &member) in queries.keys.iter().zip(&queries.is_member) {
        let answer = contains_query(filter, key);
        assert!(answer || !member, "filter lost member key {key:#x}");
        match_count += usize::from(answer);
        non_member_count += usize::from(!member);
        false_positives += usize::from(answer && !member);
    }

    let mut samples = Vec::with_capacity(repetitions as usize);
    for _ in 0..repetitions {
        let mut passes = 0u32;
        let started = Instant::now();
        let mut elapsed = 0.0;
        while elapsed < MIN_TIMED_SECONDS {
            let mut matches = 0usize;
            for &key in &queries.keys {
                matches += usize::from(contains_query(filter, key));
            }
            assert_eq!(std::hint::black_box(matches), match_count);
            passes += 1;
            elapsed = started.elapsed().as_secs_f64();
        }
        samples.push(elapsed * 1e9 / (f64::from(passes) * queries.len() as f64));
    }
    let ns_per_query = median(&mut samples);
    assert!(
        SANITY_NS_PER_KEY.contains(&ns_per_query),
        "implausible query timing: {ns_per_query} ns/query"
    );

    QueryTiming {
        ns_per_query,
        match_count,
        false_positives,
        non_member_count,
    }
}

/// Positive rate over `probes` uniformly random keys guaranteed absent from
/// `keys`.
pub fn measure_fpp(filter: &AnyFilter, keys: &[u64], probes: usize, seed: u64) -> f64 {
    assert!(probes > 0, "fpp needs at least one probe");
    let key_set: HashSet<u64> = keys.iter().copied().collect();
    let mut rng = SplitMix64::new(seed);
    let mut positives = 0usize;
    let mut sampled = 0usize;
    while sampled < probes {
        let probe = rng.next();
        if key_set.contains(&probe) {
            continue;
        }
        sampled += 1;
        positives += usize::from(filter.contains(probe));
    }
    positives as f64 / probes as f64
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}
