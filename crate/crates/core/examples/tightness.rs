//! Sieve one integer past the standard interval and watch it break.
//!
//! With frontier prime 3 the widened interval reaches 25 = 5^2, and 5 is not
//! yet a base prime, so 25 survives.
//!
//! cargo run --example tightness

use pocketprimes::verify::{tightness_demo, Tightness};
use pocketprimes::{seed_state, seed_state_custom, MethodKind};

fn report(label: &str, t: Tightness) {
    match t {
        Tightness::Works { top } => println!("{label}: works (top = {top})"),
        Tightness::FailsAt { fails_at, top } => println!("{label}: fails_at {fails_at} (top = {top})"),
    }
}

fn main() -> pocketprimes::Result<()> {
    let seed = seed_state(MethodKind::SquarePlus);
    report("seed, extra 3", tightness_demo(&seed, 3)?);
    report("seed, extra 4", tightness_demo(&seed, 4)?);

    // 17 and 19 are twins, so widening past 17 lets 19^2 through.
    let custom = seed_state_custom(&[2, 3, 5, 7, 11, 13, 17])?;
    report("up to 17, extra 4", tightness_demo(&custom, 4)?);
    // 23 and 29 are not, and 25^2 = 625 still has the factor 5.
    let custom = seed_state_custom(&[2, 3, 5, 7, 11, 13, 17, 19, 23])?;
    report("up to 23, extra 4", tightness_demo(&custom, 4)?);
    Ok(())
}
