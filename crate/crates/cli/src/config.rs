//! Benchmark run configuration and the seed streams derived from it.

use binfuse::{FilterKind, SplitMix64};

/// How the key set is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyMode {
    Random,
    Sequential,
}

impl std::str::FromStr for KeyMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(KeyMode::Random),
            "sequential" => Ok(KeyMode::Sequential),
            other => Err(format!(
                "unknown key mode {other:?} (expected random or sequential)"
            )),
        }
    }
}

/// Size parameter of a filter: fingerprint width for fuse and xor filters,
/// a bit budget per key for Bloom filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bits {
    Fingerprint(u32),
    PerKey(f64),
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bits::Fingerprint(bits) => write!(f, "{bits}"),
            Bits::PerKey(bits) => write!(f, "{bits}"),
        }
    }
}

/// One benchmark run: which filter to build, from how many keys, and how to
/// probe it.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub kind: FilterKind,
    pub n: usize,
    pub bits: Bits,
    pub query_set_size: usize,
    pub in_set_fraction: f64,
    pub repetitions: u32,
    pub key_mode: KeyMode,
    pub rng_seed: u64,
}

/// Independent seed streams derived from one configured seed. Datasets and
/// filter construction must not share a stream, or reseeding the filter
/// would silently reshuffle the workload.
#[derive(Debug, Clone, Copy)]
pub struct StreamSeeds {
    pub keys: u64,
    pub filter: u64,
    pub queries: u64,
    pub probes: u64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.query_set_size == 0 {
            return Err("query set size must be at least 1".into());
        }
        if self.repetitions == 0 || self.repetitions % 2 == 0 {
            return Err("repetitions must be odd so the median is well-defined".into());
        }
        if !(0.0..=1.0).contains(&self.in_set_fraction) {
            return Err("in-set fraction must lie in [0, 1]".into());
        }
        if self.n == 0 && self.in_set_fraction > 0.0 {
            return Err("an empty key set cannot supply member queries".into());
        }
        match (self.kind, self.bits) {
            (FilterKind::Bloom, Bits::PerKey(b)) if b > 0.0 && b.is_finite() => Ok(()),
            (FilterKind::Bloom, Bits::PerKey(_)) => {
                Err("bits per key must be positive and finite".into())
            }
            (FilterKind::Bloom, Bits::Fingerprint(_)) => {
                Err("bloom filters take --bits-per-key, not --bits".into())
            }
            (_, Bits::Fingerprint(8 | 16)) => Ok(()),
            (_, Bits::Fingerprint(b)) => Err(format!("fingerprint width must be 8 or 16, got {b}")),
            (_, Bits::PerKey(_)) => Err(format!(
                "{} filters take --bits, not --bits-per-key",
                self.kind.name()
            )),
        }
    }

    /// Derives the per-purpose seed streams for this run. Fixed derivation
    /// order keeps a given `rng_seed` reproducible across invocations.
    pub fn stream_seeds(&self) -> StreamSeeds {
        let mut rng = SplitMix64::new(self.rng_seed);
        StreamSeeds {
            keys: rng.next(),
            filter: rng.next(),
            queries: rng.next(),
            probes: rng.next(),
        }
    }
}
