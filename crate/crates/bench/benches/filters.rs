//! Construction and query throughput across the four filter kinds.
//!
//! Construction rebuilds each filter from a fresh seed stream per iteration,
//! so fuse timings include their occasional retry, exactly as real builds do.

use std::hint::black_box;

use binfuse::{Arity, BloomFilter, DEFAULT_MAX_ATTEMPTS, Fuse8, Seed, SplitMix64, Xor8};
use binfuse_bench::sample_keys;
use criterion::{BenchmarkId, Criterion, Throughput, criterion_group, criterion_main};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    for n in [10_000usize, 100_000, 1_000_000] {
        let keys = sample_keys(n, 0xbe9c4);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_function(BenchmarkId::new("fuse3", n), |b| {
            let mut seeds = SplitMix64::new(1);
            b.iter(|| {
                Fuse8::construct_with(&keys, Arity::Three, DEFAULT_MAX_ATTEMPTS, &mut seeds)
                    .unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("fuse4", n), |b| {
            let mut seeds = SplitMix64::new(1);
            b.iter(|| {
                Fuse8::construct_with(&keys, Arity::Four, DEFAULT_MAX_ATTEMPTS, &mut seeds)
                    .unwrap()
            })
        });
        group.bench_function(BenchmarkId::new("xor", n), |b| {
            let mut seeds = SplitMix64::new(1);
            b.iter(|| Xor8::construct_with(&keys, DEFAULT_MAX_ATTEMPTS, &mut seeds).unwrap())
        });
        group.bench_function(BenchmarkId::new("bloom", n), |b| {
            b.iter(|| {
                let mut bloom = BloomFilter::with_optimal_hash_count(n, 12.0, Seed::new(7));
                bloom.populate(&keys);
                bloom
            })
        });
    }
    group.finish();
}

fn queries(c: &mut Criterion) {
    let n = 1_000_000usize;
    let keys = sample_keys(n, 0xda7a);
    let mut seeds = SplitMix64::new(1);
    let (fuse3, _) =
        Fuse8::construct_with(&keys, Arity::Three, DEFAULT_MAX_ATTEMPTS, &mut seeds).unwrap();
    let (fuse4, _) =
        Fuse8::construct_with(&keys, Arity::Four, DEFAULT_MAX_ATTEMPTS, &mut seeds).unwrap();
    let (xor, _) = Xor8::construct_with(&keys, DEFAULT_MAX_ATTEMPTS, &mut seeds).unwrap();
    let mut bloom = BloomFilter::with_optimal_hash_count(n, 12.0, Seed::new(7));
    bloom.populate(&keys);

    // A fixed probe batch, half members and half fresh draws, to defeat
    // branch-predictable all-hit or all-miss patterns.
    let mut probe_rng = SplitMix64::new(0x9e0be5);
    let probes: Vec<u64> = (0..8192)
        .map(|i| {
            if i % 2 == 0 {
                keys[(probe_rng.next() % n as u64) as usize]
            } else {
                probe_rng.next()
            }
        })
        .collect();

    let mut group = c.benchmark_group("query");
    group.throughput(Throughput::Elements(probes.len() as u64));
    group.bench_function("fuse3/1000000", |b| {
        b.iter(|| probes.iter().filter(|&&key| fuse3.contains(black_box(key))).count())
    });
    group.bench_function("fuse4/1000000", |b| {
        b.iter(|| probes.iter().filter(|&&key| fuse4.contains(black_box(key))).count())
    });
    group.bench_function("xor/1000000", |b| {
        b.iter(|| probes.iter().filter(|&&key| xor.contains(black_box(key))).count())
    });
    group.bench_function("bloom/1000000", |b| {
        b.iter(|| probes.iter().filter(|&&key| bloom.contains(black_box(key))).count())
    });
    group.finish();
}

criterion_group!(benches, construction, queries);
criterion_main!(benches);
