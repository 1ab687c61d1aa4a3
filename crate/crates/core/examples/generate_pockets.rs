//! Print the first pockets of each interval rule.
//!
//! cargo run --example generate_pockets

use pocketprimes::{generate, MethodKind, Stop};

fn main() -> pocketprimes::Result<()> {
    for (method, n) in [(MethodKind::Bertrand, 10), (MethodKind::Square, 5), (MethodKind::SquarePlus, 4)] {
        println!("method {method}");
        for p in generate(method, Stop::pockets(n))? {
            println!(
                "  pocket {:>2} {:<18} order {:>6}  max {:>7}  p_{}..p_{}",
                p.index,
                p.interval.to_string(),
                p.order(),
                p.max_prime().unwrap_or(0),
                p.first_ordinal,
                p.last_ordinal()
            );
        }
    }
    Ok(())
}
