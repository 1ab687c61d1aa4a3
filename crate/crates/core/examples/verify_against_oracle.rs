//! Check a run against a plain sieve and the pocket count identity.
//!
//! cargo run --release --example verify_against_oracle

use pocketprimes::verify::{check_partition, count_identity, first_mismatch, OracleTable};
use pocketprimes::{generate, MethodKind, Stop};

fn main() -> pocketprimes::Result<()> {
    let limit = 1_000_000;
    let oracle = OracleTable::new(limit)?;
    for method in MethodKind::ALL {
        let pockets = generate(method, Stop::limit(limit))?;
        let primes: Vec<u64> = pockets.iter().flat_map(|p| p.primes.iter().copied()).collect();
        println!(
            "method {method}: {} pockets, {} primes, mismatch {:?}, partition {:?}",
            pockets.len(),
            primes.len(),
            first_mismatch(oracle.primes(), &primes),
            check_partition(&pockets)
        );
    }
    for k in [1, 9, 30, 114] {
        let c = count_identity(k, &oracle)?;
        println!("k = {k}: primes in (p_k, top = {}] = {}, pi(top) - k = {}", c.top, c.lhs, c.rhs);
    }
    Ok(())
}
