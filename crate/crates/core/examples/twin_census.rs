//! Twin pairs inside each standard pocket.
//!
//! cargo run --release --example twin_census

use pocketprimes::verify::twin_census_run;
use pocketprimes::{generate, MethodKind, Stop};

fn main() -> pocketprimes::Result<()> {
    let pockets = generate(MethodKind::SquarePlus, Stop::pockets(4))?;
    for c in twin_census_run(&pockets) {
        let first = c.pairs.first().map(|(a, b)| format!("({a}, {b})")).unwrap_or_default();
        print!("pocket {}: {} pairs {first}", c.pocket_index, c.count());
        if let Some((a, b)) = c.boundary_pair {
            print!(" boundary ({a}, {b})");
        }
        println!();
    }
    Ok(())
}
