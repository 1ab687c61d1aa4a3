//! Order sequences for the three rules, and the first interval too large to sieve.
//!
//! cargo run --release --example order_sequences

use pocketprimes::{order_sequence, MethodKind, PocketStream};

fn main() -> pocketprimes::Result<()> {
    println!("bertrand     {:?}", order_sequence(MethodKind::Bertrand, 10)?);
    println!("square       {:?}", order_sequence(MethodKind::Square, 6)?);
    println!("square-plus  {:?}", order_sequence(MethodKind::SquarePlus, 4)?);

    let mut stream = PocketStream::new(MethodKind::SquarePlus);
    while stream.next_index() <= 4 {
        stream.next_pocket()?;
    }
    // Bounds are exact even when sieving them is out of reach.
    println!("square-plus pocket 5 would span {}", stream.peek_interval()?);
    Ok(())
}
