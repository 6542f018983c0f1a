//! Dense-transform benchmarks: integer FWHT butterflies and exact NTT
//! cyclic correlation across representative lengths.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparseconv::{cyclic_correlate, fwht_in_place};

fn bench_fwht(c: &mut Criterion) {
    let mut group = c.benchmark_group("fwht");
    for k in [10u32, 12, 14, 16] {
        let len = 1usize << k;
        let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
        let input: Vec<i64> = (0..len).map(|_| rng.gen_range(-1000..=1000)).collect();
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::from_parameter(len), &input, |b, input| {
            b.iter(|| {
                let mut v = input.clone();
                fwht_in_place(&mut v).unwrap();
                black_box(v)
            })
        });
    }
    group.finish();
}

fn bench_cyclic_correlate(c: &mut Criterion) {
    let mut group = c.benchmark_group("cyclic_correlate");
    // A small prime, a power of two, and a large prime close to the
    // matchers' working sizes.
    for len in [1009usize, 4096, 65537] {
        let mut rng = ChaCha8Rng::seed_from_u64(len as u64);
        let a: Vec<i64> = (0..len).map(|_| rng.gen_range(0..64)).collect();
        let b: Vec<i64> = (0..len).map(|_| rng.gen_range(0..64)).collect();
        group.throughput(Throughput::Elements(len as u64));
        group.bench_with_input(BenchmarkId::from_parameter(len), &(a, b), |bench, (a, b)| {
            bench.iter(|| black_box(cyclic_correlate(a, b, a.len()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(transforms, bench_fwht, bench_cyclic_correlate);
criterion_main!(transforms);
