//! Parallel versus sequential on the hot kernels.
//!
//! `primes` compares the two segmented sieves directly. The others run the
//! same library call on the default rayon pool and on a one-thread pool, so
//! the only difference is the worker count. Build with
//! `--no-default-features` to time the pure sequential fallback instead.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use galrep::algebra::{cyclotomic_poly, factor_poly_mod_ell};
use galrep::constructions::{raise_sieve, RaiseQuery};
use galrep::par;
use galrep::primes::{primes_in_range, primes_in_range_sequential, primes_up_to};

fn primes(c: &mut Criterion) {
    let mut g = c.benchmark_group("primes");
    for hi in [1_000_000u64, 10_000_000] {
        g.bench_with_input(BenchmarkId::new("parallel", hi), &hi, |b, &hi| {
            b.iter(|| primes_in_range(2, black_box(hi)).len())
        });
        g.bench_with_input(BenchmarkId::new("sequential", hi), &hi, |b, &hi| {
            b.iter(|| primes_in_range_sequential(2, black_box(hi)).len())
        });
    }
    g.finish();
}

/// Run `f` once on the global pool and once pinned to a single worker.
fn both<F: Fn() -> usize + Sync>(c: &mut Criterion, name: &str, f: F) {
    let mut g = c.benchmark_group(name);
    g.sample_size(20);
    g.bench_function("parallel", |b| b.iter(&f));
    #[cfg(feature = "parallel")]
    {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .expect("pool");
        g.bench_function("sequential", |b| b.iter(|| one.install(&f)));
    }
    g.finish();
}

fn kernels(c: &mut Criterion) {
    if !par::is_parallel() {
        eprintln!("built without `parallel`: both arms run sequentially");
    }
    let query = RaiseQuery::new(5, &[3], 2_000_000).unwrap();
    both(c, "raise_sieve", || {
        raise_sieve(black_box(&query)).unwrap().len()
    });

    let phi = cyclotomic_poly(25);
    let ells: Vec<u64> = primes_up_to(5_000)
        .into_iter()
        .filter(|&l| l != 5)
        .collect();
    both(c, "cyclotomic_factor", || {
        par::map(&ells, |&l| factor_poly_mod_ell(&phi, l).unwrap().len())
            .into_iter()
            .sum()
    });
}

criterion_group!(benches, primes, kernels);
criterion_main!(benches);
