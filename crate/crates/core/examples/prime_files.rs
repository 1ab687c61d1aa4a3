//! Round-trip a prime list through the text and binary encodings.
//!
//! cargo run --example prime_files

use pocketprimes::format::{decode_bin, encode_bin, encode_text, parse_text, PocketReportRow, CSV_HEADER};
use pocketprimes::verify::twin_census_run;
use pocketprimes::{generate, MethodKind, Stop};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let pockets = generate(MethodKind::SquarePlus, Stop::pockets(3))?;
    let primes: Vec<u64> = pockets.iter().flat_map(|p| p.primes.iter().copied()).collect();

    let bin = encode_bin(&primes);
    let text = encode_text(&primes);
    println!("{} primes: {} bytes binary, {} bytes text", primes.len(), bin.len(), text.len());
    println!("header {:02x?}", &bin[..12]);
    assert_eq!(decode_bin(&bin)?, primes);
    assert_eq!(parse_text(std::str::from_utf8(&text)?)?, primes);

    println!("{CSV_HEADER}");
    for (p, c) in pockets.iter().zip(twin_census_run(&pockets)) {
        println!("{}", PocketReportRow::new(p, &c).to_csv());
    }
    Ok(())
}
