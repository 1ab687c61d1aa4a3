//! Sieve one interval directly with different segment sizes, layouts and thread counts.
//!
//! cargo run --release --example segmented_sieve

use std::time::Instant;

use pocketprimes::sieve::coverage_limit;
use pocketprimes::verify::oracle_sieve;
use pocketprimes::{Interval, Layout, Marking, Sieve, SieveConfig};

fn main() -> pocketprimes::Result<()> {
    let base = oracle_sieve(1_000)?;
    let interval = Interval::new(1_001, 998_000)?;
    println!("base primes up to 997 cover up to {}", coverage_limit(997));

    for (capacity, layout, threads) in [
        (1 << 10, Layout::Full, 1),
        (1 << 16, Layout::OddOnly, 1),
        (1 << 16, Layout::OddOnly, 4),
        (1 << 20, Layout::OddOnly, 4),
    ] {
        let sieve = Sieve::new(SieveConfig {
            segment_capacity: capacity,
            layout,
            marking: Marking::Pruned,
            threads,
        });
        let start = Instant::now();
        let primes = sieve.sieve_interval(interval, &base)?;
        println!(
            "capacity {capacity:>8} {layout:?} threads {threads}: {} primes, last {}, {:?}",
            primes.len(),
            primes.last().unwrap(),
            start.elapsed()
        );
    }

    // Asking for more than the base primes can certify is an error.
    let short = Sieve::new(SieveConfig::default()).sieve_interval(Interval::new(10, 200)?, &[2, 3, 5]);
    println!("{short:?}");
    Ok(())
}
