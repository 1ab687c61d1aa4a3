//! Continue from a hand-written list of small primes.
//!
//! cargo run --example custom_seed

use pocketprimes::{seed_state_custom, PocketStream, StreamConfig};

fn main() -> pocketprimes::Result<()> {
    println!("{:?}", seed_state_custom(&[2, 3, 5, 9]));
    println!("{:?}", seed_state_custom(&[2, 3, 7]));

    let state = seed_state_custom(&[2, 3, 5, 7, 11, 13])?;
    let stream = PocketStream::from_custom_seed(state, StreamConfig::default());
    for p in stream.seed_pockets() {
        println!("seed pocket {} {} order {}", p.index, p.interval, p.order());
    }
    for p in stream.take(2) {
        let p = p?;
        println!("pocket {} {} order {} max {:?}", p.index, p.interval, p.order(), p.max_prime());
    }
    Ok(())
}
