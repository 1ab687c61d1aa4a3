//! Strip the first k Euler factors from zeta(z) and compare with the survivor sum.
//!
//! cargo run --release --example euler_product

use pocketprimes::zeta::{coprime_survivors, euler_residual, first_composite_survivor, leading_survivors_are_next_pocket};

fn main() -> pocketprimes::Result<()> {
    println!("survivors of 2, 3 up to 30: {:?}", coprime_survivors(2, 30).survivors);
    for k in 1..=6 {
        println!(
            "k = {k}: leading survivors form the next pocket: {}, first composite survivor {}",
            leading_survivors_are_next_pocket(k)?,
            first_composite_survivor(k)
        );
    }

    println!("{:>4} {:>2} {:>18} {:>18} {:>10} {:>10}", "z", "k", "product", "survivors", "gap", "bound");
    for z in [1.5, 2.0, 3.0] {
        for k in [0, 1, 3, 6] {
            let r = euler_residual(z, k, 1_000_000)?;
            println!(
                "{z:>4} {k:>2} {:>18.12} {:>18.12} {:>10.2e} {:>10.2e}",
                r.product_side, r.survivor_side, r.gap, r.tail_bound
            );
        }
    }
    Ok(())
}
