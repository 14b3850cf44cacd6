//! Key-set and query-set generation.

use crate::config::KeyMode;
use binfuse::SplitMix64;
use std::collections::HashSet;

/// Produces exactly `n` distinct keys, reproducibly for a fixed seed.
/// Sequential mode counts from 1 so that key 0 stays available as an
/// always-absent probe.
pub fn generate_keys(n: usize, mode: KeyMode, seed: u64) -> Vec<u64> {
    match mode {
        KeyMode::Sequential => (1..=n as u64).collect(),
        KeyMode::Random => {
            let mut rng = SplitMix64::new(seed);
            let mut seen = HashSet::with_capacity(n * 2);
            let mut keys = Vec::with_capacity(n);
            while keys.len() < n {
                let key = rng.next();
                if seen.insert(key) {
                    keys.push(key);
                }
            }
            keys
        }
    }
}

/// A shuffled probe workload with per-query membership ground truth.
#[derive(Debug, Clone)]
pub struct QuerySet {
    pub keys: Vec<u64>,
    pub is_member: Vec<bool>,
    pub member_count: usize,
}

impl QuerySet {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }
}

/// Builds a query set of exactly `size` keys: `⌊fraction·size⌋` members drawn
/// with replacement from `keys`, the rest uniform non-members, shuffled.
pub fn generate_query_set(keys: &[u64], size: usize, in_set_fraction: f64, seed: u64) -> QuerySet {
    assert!(
        (0.0..=1.0).contains(&in_set_fraction),
        "in-set fraction out of range"
    );
    let member_count = (in_set_fraction * size as f64).floor() as usize;
    assert!(
        member_count == 0 || !keys.is_empty(),
        "member queries require a non-empty key set"
    );

    let key_set: HashSet<u64> = keys.iter().copied().collect();
    let mut rng = SplitMix64::new(seed);
    let mut queries = Vec::with_capacity(size);
    let mut is_member = Vec::with_capacity(size);
    for _ in 0..member_count {
        let index = binfuse::hashing::reduce64(rng.next(), keys.len() as u64) as usize;
        queries.push(keys[index]);
        is_member.push(true);
    }
    while queries.len() < size {
        let probe = rng.next();
        if key_set.contains(&probe) {
            continue;
        }
        queries.push(probe);
        is_member.push(false);
    }

    // Fisher-Yates with the same stream, so one seed fixes the whole set.
    for i in (1..queries.len()).rev() {
        let j = binfuse::hashing::reduce64(rng.next(), (i + 1) as u64) as usize;
        queries.swap(i, j);
        is_member.swap(i, j);
    }

    QuerySet {
        keys: queries,
        is_member,
        member_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_keys_count_from_one() {
        assert_eq!(generate_keys(5, KeyMode::Sequential, 99), vec![1, 2, 3, 4, 5]);
        assert!(generate_keys(0, KeyMode::Sequential, 99).is_empty());
    }

    #[test]
    fn random_keys_are_distinct_and_reproducible() {
        let a = generate_keys(100_000, KeyMode::Random, 7);
        let b = generate_keys(100_000, KeyMode::Random, 7);
        assert_eq!(a, b);
        let distinct: HashSet<u64> = a.iter().copied().collect();
        assert_eq!(distinct.len(), a.len());
        assert_ne!(a, generate_keys(100_000, KeyMode::Random, 8));
    }

    #[test]
    fn query_sets_hit_the_exact_member_count() {
        let keys = generate_keys(10_000, KeyMode::Random, 3);
        let key_set: HashSet<u64> = keys.iter().copied().collect();
        let set = generate_query_set(&keys, 40_000, 0.25, 11);
        assert_eq!(set.len(), 40_000);
        assert_eq!(set.member_count, 10_000);
        let mut members = 0;
        for (query, &label) in set.keys.iter().zip(&set.is_member) {
            assert_eq!(key_set.contains(query), label);
            members += usize::from(label);
        }
        assert_eq!(members, set.member_count);
    }

    #[test]
    fn boundary_fractions() {
        let keys = generate_keys(1_000, KeyMode::Random, 4);
        let all = generate_query_set(&keys, 5_000, 1.0, 12);
        assert!(all.is_member.iter().all(|&m| m));
        let none = generate_query_set(&keys, 5_000, 0.0, 12);
        assert!(none.is_member.iter().all(|&m| !m));
        let empty_keys = generate_query_set(&[], 100, 0.0, 12);
        assert_eq!(empty_keys.len(), 100);
        assert!(!empty_keys.is_empty());
    }

    #[test]
    fn shuffling_mixes_members_through_the_sequence() {
        let keys = generate_keys(1_000, KeyMode::Random, 5);
        let set = generate_query_set(&keys, 10_000, 0.5, 13);
        // An unshuffled set would put all 5000 members in the first half.
        let front_members: usize = set.is_member[..5_000].iter().map(|&m| usize::from(m)).sum();
        assert!((2_300..=2_700).contains(&front_members));
    }
}
