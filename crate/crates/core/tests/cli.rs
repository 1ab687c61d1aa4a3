use std::fs;

use pocketprimes::checkpoint::Checkpoint;
use pocketprimes::cli::{run_with, EXIT_USAGE};
use pocketprimes::format::{decode_bin, parse_text};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["pocketprimes"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn gen_text_standard_three_pockets() {
    let (code, out, err) = run(&["gen", "--method", "3", "--pockets", "3"]);
    assert_eq!(code, 0, "{err}");
    let primes = parse_text(&out).unwrap();
    assert_eq!(primes.len(), 114);
    assert_eq!(primes.last(), Some(&619));
    assert_eq!(err.lines().count(), 3);
    assert!(err.contains("pocket 3 [25, 624] order=105"));
}

#[test]
fn gen_default_method_is_standard() {
    let (_, a, _) = run(&["gen", "--pockets", "2"]);
    let (_, b, _) = run(&["gen", "--method", "3", "--pockets", "2"]);
    assert_eq!(a, b);
    assert_eq!(a, "2\n3\n5\n7\n11\n13\n17\n19\n23\n");
}

#[test]
fn gen_csv_report_bertrand() {
    let (code, out, _) = run(&["gen", "--method", "1", "--pockets", "5", "--format", "csv-report"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("j,lo,hi,order,max_prime,first_ordinal,twin_pairs,truncated"));
    let orders: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(orders, ["1", "1", "1", "1", "2"]);
}

#[test]
fn gen_limit_truncates() {
    let (code, out, err) = run(&["gen", "--limit", "100"]);
    assert_eq!(code, 0);
    let primes = parse_text(&out).unwrap();
    assert_eq!(primes.len(), 25);
    assert_eq!(primes.last(), Some(&97));
    assert!(err.lines().last().unwrap().ends_with("truncated"));
}

#[test]
fn binary_and_text_outputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("p.bin");
    let txt = dir.path().join("p.txt");
    for (path, fmt) in [(&bin, "bin"), (&txt, "text")] {
        let (code, _, err) = run(&["gen", "--method", "2", "--limit", "1000000", "--format", fmt, "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
    let from_bin = decode_bin(&fs::read(&bin).unwrap()).unwrap();
    let from_txt = parse_text(&fs::read_to_string(&txt).unwrap()).unwrap();
    assert_eq!(from_bin, from_txt);
    assert_eq!(from_bin.len(), 78_498);
}

#[test]
fn binary_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("p.bin");
    run(&["gen", "--pockets", "3", "--format", "bin", "--out", bin.to_str().unwrap()]);
    let mut out = Vec::new();
    let code = run_with(["pocketprimes", "gen", "--pockets", "3", "--format", "bin"], &mut out, &mut Vec::new());
    assert_eq!(code, 0);
    assert_eq!(out, fs::read(&bin).unwrap());
}

#[test]
fn huge_pocket_needs_acknowledgment() {
    let (code, out, err) = run(&["gen", "--pockets", "5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--huge-ack"), "{err}");
    // Pockets before the refusal are still written.
    assert_eq!(parse_text(&out).unwrap().len(), 32_736);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["gen"]).0, EXIT_USAGE);
    assert_eq!(run(&["gen", "--pockets", "2", "--method", "7"]).0, EXIT_USAGE);
    assert_eq!(run(&["gen", "--pockets", "0"]).0, EXIT_USAGE);
    assert_eq!(run(&["gen", "--pockets", "2", "--checkpoint", "x.ckpt"]).0, EXIT_USAGE);
    assert_eq!(run(&["zeta", "--z", "1", "--k", "2"]).0, EXIT_USAGE);
    assert_eq!(run(&["verify", "--limit", "2000000000"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn seed_file_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    let bad = dir.path().join("bad.txt");
    fs::write(&good, "2\n3\n5\n7\n").unwrap();
    fs::write(&bad, "2\n3\n5\n9\n").unwrap();
    let (code, out, _) = run(&["gen", "--pockets", "2", "--seed-file", good.to_str().unwrap()]);
    assert_eq!(code, 0);
    let primes = parse_text(&out).unwrap();
    assert_eq!(primes, pocketprimes::verify::oracle_sieve(7 * 11 + 3).unwrap());
    let (code, _, err) = run(&["gen", "--pockets", "2", "--seed-file", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains('9'), "{err}");
}

#[test]
fn verify_passes() {
    let (code, out, _) = run(&["verify", "--method", "1", "--limit", "100000"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 3);
    assert!(out.contains("primes=9592"));
}

#[test]
fn twins_table() {
    let (code, out, _) = run(&["twins", "--pockets", "4"]);
    assert_eq!(code, 0);
    let counts: Vec<&str> = out.lines().skip(2).map(|l| l.split_whitespace().nth(4).unwrap()).collect();
    assert_eq!(counts, ["3", "24", "3660"]);
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    run(&["twins", "--pockets", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(
        fs::read_to_string(csv).unwrap(),
        "j,lo,hi,order,twin_pairs,boundary_pair\n1,2,3,2,0,3/5\n2,4,24,7,3,\n3,25,624,105,24,\n"
    );
}

#[test]
fn tightness_output() {
    let (code, out, _) = run(&["tightness", "--extra", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("fails_at 25"));
    let (code, out, _) = run(&["tightness", "--extra", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("works (top = 24)"));
    assert_eq!(run(&["tightness", "--extra", "5"]).0, EXIT_USAGE);
}

#[test]
fn zeta_output() {
    let (code, out, _) = run(&["zeta", "--z", "2", "--k", "2", "--trunc", "100000"]);
    assert_eq!(code, 0);
    assert!(out.contains("PASS"));
}

#[test]
fn checkpoint_resume_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let whole = dir.path().join("whole.txt");
    let part = dir.path().join("part.txt");
    let ck = dir.path().join("run.ckpt");
    let (w, p, c) = (whole.to_str().unwrap(), part.to_str().unwrap(), ck.to_str().unwrap());

    assert_eq!(run(&["gen", "--method", "1", "--pockets", "16", "--out", w]).0, 0);
    assert_eq!(run(&["gen", "--method", "1", "--pockets", "10", "--out", p, "--checkpoint", c]).0, 0);
    let manifest = Checkpoint::load(&ck).unwrap();
    assert_eq!(manifest.next_index, 11);
    assert_eq!(manifest.frontier_mpp, 317);
    assert_eq!(manifest.cumulative, 66);

    fs::write(&part, [fs::read(&part).unwrap(), b"3\n1".to_vec()].concat()).unwrap();
    let (code, _, err) = run(&["gen", "--method", "1", "--pockets", "16", "--out", p, "--checkpoint", c]);
    assert_eq!(code, 0, "{err}");
    assert!(err.starts_with("resuming at pocket 11"));
    assert_eq!(fs::read(&part).unwrap(), fs::read(&whole).unwrap());

    // A damaged prefix is refused.
    let mut bytes = fs::read(&part).unwrap();
    bytes[0] = b'9';
    fs::write(&part, bytes).unwrap();
    let (code, _, err) = run(&["gen", "--method", "1", "--pockets", "20", "--out", p, "--checkpoint", c]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("checksum"), "{err}");
}
