//! Interrupt a checkpointed run, damage the tail of its output and resume.
//!
//! The resumed file matches an uninterrupted run byte for byte.
//!
//! cargo run --example checkpoint_resume

use std::fs::{self, OpenOptions};
use std::io::{self, Write};

use pocketprimes::checkpoint::Checkpoint;
use pocketprimes::cli::run_with;

fn gen(args: &[&str]) -> i32 {
    let mut argv = vec!["pocketprimes", "gen"];
    argv.extend_from_slice(args);
    run_with(argv, &mut io::stdout(), &mut io::sink())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("pocketprimes-resume-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    let out = dir.join("primes.bin");
    let whole = dir.join("whole.bin");
    let manifest = dir.join("run.ckpt");
    let (out_s, whole_s, manifest_s) = (out.to_str().unwrap(), whole.to_str().unwrap(), manifest.to_str().unwrap());

    gen(&["--method", "1", "--pockets", "18", "--format", "bin", "--out", whole_s]);

    gen(&["--method", "1", "--pockets", "12", "--format", "bin", "--out", out_s, "--checkpoint", manifest_s]);
    let ck = Checkpoint::load(&manifest)?;
    println!("stopped before pocket {} with {} primes", ck.next_index, ck.cumulative);

    // A crash mid-pocket leaves a partial record behind.
    OpenOptions::new().append(true).open(&out)?.write_all(&[0xff; 5])?;

    let code = gen(&["--method", "1", "--pockets", "18", "--format", "bin", "--out", out_s, "--checkpoint", manifest_s]);
    println!("resume exit code {code}");
    println!("identical to uninterrupted run: {}", fs::read(&out)? == fs::read(&whole)?);

    fs::remove_dir_all(&dir)?;
    Ok(())
}
