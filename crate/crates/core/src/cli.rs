//! Command-line front end: `gen`, `verify`, `twins`, `tightness` and `zeta`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage/limit/overflow errors,
//! 3 I/O failures.

use std::ffi::OsString;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::checkpoint::{file_prefix_digest, Checkpoint, CheckpointError};
use crate::domain::{seed_state_custom, GeneratorState, MethodKind, Pocket};
use crate::error::Error;
use crate::format::{bin_header, decode_bin, parse_text, Format, FormatError, PocketReportRow, BIN_HEADER_LEN, CSV_HEADER};
use crate::pockets::{collect_run, generate_with, PocketStream, Stop, StreamConfig};
use crate::sieve::{Layout, SieveConfig};
use crate::verify::{self, check_partition, count_identity, first_mismatch, tightness_demo, twin_census, OracleTable, Tightness};
use crate::zeta;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Default bytes of flags per sieve segment (2^20 integers with the odd-only layout).
pub const DEFAULT_SEGMENT_BYTES: usize = 1 << 16;

#[derive(Debug, Parser)]
#[command(name = "pocketprimes", version, about = "Generate primes pocket by pocket and check the results")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate primes and write them out.
    Gen(GenArgs),
    /// Compare a run against the independent oracle sieve.
    Verify(VerifyArgs),
    /// Count twin primes per pocket.
    Twins(TwinsArgs),
    /// Widen the standard interval and report the first false prime.
    Tightness(TightnessArgs),
    /// Compare both sides of the truncated Euler product.
    Zeta(ZetaArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SieveArgs {
    /// Bytes of flags per sieve segment.
    #[arg(long, env = "POCKETPRIMES_SEGMENT_BYTES", default_value_t = DEFAULT_SEGMENT_BYTES)]
    pub segment_bytes: usize,
    /// Worker threads for segment marking [default: available cores].
    #[arg(long)]
    pub threads: Option<usize>,
    /// Allow intervals whose upper bound exceeds 2^38.
    #[arg(long)]
    pub huge_ack: bool,
}

impl SieveArgs {
    pub fn stream_config(&self) -> StreamConfig {
        let threads = self
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1);
        StreamConfig {
            sieve: SieveConfig {
                segment_capacity: SieveConfig::capacity_for_bytes(self.segment_bytes, Layout::OddOnly),
                threads,
                ..SieveConfig::default()
            },
            allow_huge: self.huge_ack,
        }
    }
}

fn parse_method(s: &str) -> Result<MethodKind, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
#[command(group = clap::ArgGroup::new("stop").required(true).multiple(true).args(["pockets", "limit"]))]
pub struct GenArgs {
    #[arg(long, value_parser = parse_method, default_value = "3")]
    pub method: MethodKind,
    /// Total pockets to emit, seed pockets included.
    #[arg(long)]
    pub pockets: Option<u64>,
    /// Largest value to sieve; the last pocket is cut here.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Output file [default: standard output].
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// text, bin or csv-report.
    #[arg(long, value_parser = parse_format, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub sieve: SieveArgs,
    /// Text-format list of the first primes to continue from.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Manifest written after each pocket; resumed from when it exists.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_method, default_value = "3")]
    pub method: MethodKind,
    #[arg(long)]
    pub limit: u64,
    #[command(flatten)]
    pub sieve: SieveArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TwinsArgs {
    #[arg(long)]
    pub pockets: u64,
    #[arg(long, value_parser = parse_method, default_value = "3")]
    pub method: MethodKind,
    /// Also write the census as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub sieve: SieveArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TightnessArgs {
    /// Width offset: 3 is the standard interval, 4 widens it by one.
    #[arg(long, default_value_t = 4)]
    pub extra: u64,
    /// Standard pockets to generate before widening.
    #[arg(long, default_value_t = 1)]
    pub pockets: u64,
    /// Start from this text-format prime list instead.
    #[arg(long, conflicts_with = "pockets")]
    pub seed_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub z: f64,
    /// Number of leading primes whose Euler factors are applied.
    #[arg(long)]
    pub k: usize,
    /// Series terms.
    #[arg(long, default_value_t = 1_000_000)]
    pub trunc: u64,
    /// Also write the result as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CHECK_FAILED,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = match e {
            Error::HugeInterval { .. } => format!("{e} (--huge-ack)"),
            _ => e.to_string(),
        };
        Failure::usage(message)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_IO,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<CheckpointError> for Failure {
    fn from(e: CheckpointError) -> Self {
        match e {
            CheckpointError::Io(io) => io.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Twins(a) => cmd_twins(&a, out),
        Command::Tightness(a) => cmd_tightness(&a, out),
        Command::Zeta(a) => cmd_zeta(&a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = run_with(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    code
}

fn read_seed_file(path: &Path) -> Result<GeneratorState, Failure> {
    let primes = parse_text(&fs::read_to_string(path)?)?;
    Ok(seed_state_custom(&primes)?)
}

enum Target<'a> {
    File { path: PathBuf, file: BufWriter<File> },
    Stream(&'a mut dyn Write),
}

/// Destination for generated pockets in one of the output formats.
struct PrimeSink<'a> {
    format: Format,
    target: Target<'a>,
    count: u64,
    bytes: u64,
    /// Binary output to a non-seekable stream is held until the count is known.
    held: Vec<u64>,
}

impl<'a> PrimeSink<'a> {
    fn create(path: Option<&Path>, format: Format, stdout: &'a mut dyn Write) -> io::Result<Self> {
        let target = match path {
            Some(p) => Target::File {
                path: p.to_path_buf(),
                file: BufWriter::new(File::create(p)?),
            },
            None => Target::Stream(stdout),
        };
        let mut sink = PrimeSink {
            format,
            target,
            count: 0,
            bytes: 0,
            held: Vec::new(),
        };
        match format {
            Format::Bin => {
                if let Target::File { file, .. } = &mut sink.target {
                    file.write_all(&bin_header(0))?;
                    sink.bytes = BIN_HEADER_LEN;
                }
            }
            Format::CsvReport => sink.write_raw(format!("{CSV_HEADER}\n").as_bytes())?,
            Format::Text => {}
        }
        Ok(sink)
    }

    /// Reopens a checkpointed file, cutting it back to `len` bytes.
    fn resume(path: &Path, format: Format, len: u64, count: u64) -> io::Result<Self> {
        let file = OpenOptions::new().read(true).write(true).open(path)?;
        file.set_len(len)?;
        let mut file = BufWriter::new(file);
        file.seek(SeekFrom::End(0))?;
        Ok(PrimeSink {
            format,
            target: Target::File {
                path: path.to_path_buf(),
                file,
            },
            count,
            bytes: len,
            held: Vec::new(),
        })
    }

    fn write_raw(&mut self, bytes: &[u8]) -> io::Result<()> {
        match &mut self.target {
            Target::File { file, .. } => file.write_all(bytes)?,
            Target::Stream(w) => w.write_all(bytes)?,
        }
        self.bytes += bytes.len() as u64;
        Ok(())
    }

    fn write_pocket(&mut self, pocket: &Pocket) -> io::Result<()> {
        match self.format {
            Format::Text => {
                let mut buf = Vec::with_capacity(pocket.primes.len() * 8);
                crate::format::write_text(&mut buf, &pocket.primes)?;
                self.write_raw(&buf)?;
            }
            Format::Bin => {
                if matches!(self.target, Target::Stream(_)) {
                    self.held.extend_from_slice(&pocket.primes);
                } else {
                    let buf: Vec<u8> = pocket.primes.iter().flat_map(|p| p.to_le_bytes()).collect();
                    self.write_raw(&buf)?;
                }
            }
            Format::CsvReport => {
                let row = PocketReportRow::new(pocket, &twin_census(pocket, None));
                self.write_raw(format!("{}\n", row.to_csv()).as_bytes())?;
            }
        }
        self.count += pocket.order();
        Ok(())
    }

    /// Flushes and brings the binary header up to date.
    fn sync(&mut self) -> io::Result<()> {
        let count = self.count;
        match &mut self.target {
            Target::File { file, .. } => {
                if self.format == Format::Bin {
                    file.seek(SeekFrom::Start(0))?;
                    file.write_all(&bin_header(count))?;
                    file.seek(SeekFrom::End(0))?;
                }
                file.flush()?;
                file.get_ref().sync_data()
            }
            Target::Stream(w) => w.flush(),
        }
    }

    fn finish(mut self) -> io::Result<()> {
        if self.format == Format::Bin {
            if let Target::Stream(w) = &mut self.target {
                w.write_all(&crate::format::encode_bin(&self.held))?;
            }
        }
        self.sync()
    }

    fn path(&self) -> Option<&Path> {
        match &self.target {
            Target::File { path, .. } => Some(path),
            Target::Stream(_) => None,
        }
    }
}

fn pocket_summary(p: &Pocket) -> String {
    format!(
        "pocket {} {} order={} max={} primes p_{}..p_{}{}",
        p.index,
        p.interval,
        p.order(),
        p.max_prime().map_or("-".to_string(), |m| m.to_string()),
        p.first_ordinal,
        p.last_ordinal(),
        if p.truncated { " truncated" } else { "" }
    )
}

fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let config = args.sieve.stream_config();
    if let Some(n) = args.pockets {
        if n == 0 {
            return Err(Failure::usage("--pockets must be at least 1"));
        }
    }
    if let Some(l) = args.limit {
        if l < 2 {
            return Err(Failure::usage("--limit must be at least 2"));
        }
    }
    if args.checkpoint.is_some() {
        if args.out.is_none() {
            return Err(Failure::usage("--checkpoint needs --out"));
        }
        if args.format == Format::CsvReport {
            return Err(Failure::usage("--checkpoint needs a prime list format (text or bin)"));
        }
    }

    let resume = match &args.checkpoint {
        Some(path) if path.exists() => Some(Checkpoint::load(path)?),
        _ => None,
    };

    let (mut stream, mut sink, pending) = match resume {
        Some(cp) => {
            if cp.method != args.method {
                return Err(Failure::usage(format!(
                    "checkpoint was written by method {}, not {}",
                    cp.method, args.method
                )));
            }
            if cp.format != args.format {
                return Err(Failure::usage(format!("checkpoint format is {}", cp.format)));
            }
            if args.out.as_deref() != Some(cp.prime_file.as_path()) {
                return Err(Failure::usage(format!(
                    "checkpoint belongs to {}",
                    cp.prime_file.display()
                )));
            }
            let prefix = cp.read_verified_prefix()?;
            let primes = match cp.format {
                Format::Bin => decode_bin(&prefix)?,
                _ => parse_text(std::str::from_utf8(&prefix).map_err(|e| Failure::usage(e.to_string()))?)?,
            };
            if primes.len() as u64 != cp.cumulative || primes.last() != Some(&cp.frontier_mpp) {
                return Err(Failure::usage("checkpoint disagrees with its prime file"));
            }
            let state = GeneratorState::from_parts(cp.method, primes, cp.frontier_mipp)?;
            let mut stream = PocketStream::from_state(state, cp.next_index, config);
            if let Some(l) = args.limit {
                stream = stream.with_limit(l);
            }
            let sink = PrimeSink::resume(&cp.prime_file, cp.format, cp.prime_file_len, cp.cumulative)?;
            let _ = writeln!(err, "resuming at pocket {} after p_{}", cp.next_index, cp.cumulative);
            (stream, sink, Vec::new())
        }
        None => {
            let mut stream = match &args.seed_file {
                Some(path) => PocketStream::from_custom_seed(read_seed_file(path)?.with_method(args.method), config),
                None => PocketStream::with_config(args.method, config),
            };
            if let Some(l) = args.limit {
                stream = stream.with_limit(l);
            }
            let seeds = stream.seed_pockets().to_vec();
            let sink = PrimeSink::create(args.out.as_deref(), args.format, stdout)?;
            (stream, sink, seeds)
        }
    };

    let wanted = |index: u64| args.pockets.is_none_or(|n| index <= n);
    let mut emit = |pocket: &Pocket, stream: &PocketStream, sink: &mut PrimeSink| -> Result<(), Failure> {
        sink.write_pocket(pocket)?;
        let _ = writeln!(err, "{}", pocket_summary(pocket));
        if let (Some(cp_path), Some(path)) = (&args.checkpoint, sink.path().map(Path::to_path_buf)) {
            sink.sync()?;
            let state = stream.state();
            let checkpoint = Checkpoint {
                method: state.method(),
                next_index: pocket.index + 1,
                frontier_mipp: pocket.interval.hi(),
                frontier_mpp: state.base_primes()[(pocket.last_ordinal() - 1) as usize],
                cumulative: pocket.last_ordinal(),
                format: sink.format,
                prime_file_len: sink.bytes,
                checksum: file_prefix_digest(&path, sink.bytes)?,
                prime_file: path,
            };
            checkpoint.save(cp_path)?;
        }
        Ok(())
    };

    for seed in pending.iter().filter(|p| wanted(p.index)) {
        emit(seed, &stream, &mut sink)?;
    }
    while wanted(stream.next_index()) {
        match stream.next_pocket() {
            Ok(pocket) => emit(&pocket, &stream, &mut sink)?,
            Err(Error::Exhausted) => break,
            Err(e) => {
                sink.finish()?;
                return Err(e.into());
            }
        }
    }
    sink.finish()?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let oracle = OracleTable::new(args.limit)?;
    let pockets = generate_with(args.method, Stop::limit(args.limit), args.sieve.stream_config())?;
    let generated: Vec<u64> = pockets.iter().flat_map(|p| p.primes.iter().copied()).collect();
    let mut failed = Vec::new();

    match first_mismatch(oracle.primes(), &generated) {
        None => writeln!(
            out,
            "PASS oracle_agreement primes={} last={}",
            generated.len(),
            generated.last().map_or("-".into(), |p| p.to_string())
        )?,
        Some(m) => {
            let show = |v: Option<u64>| v.map_or("none".to_string(), |x| x.to_string());
            writeln!(
                out,
                "FAIL oracle_agreement position={} expected={} found={}",
                m.position,
                show(m.expected),
                show(m.found)
            )?;
            failed.push("oracle_agreement");
        }
    }

    match check_partition(&pockets) {
        Ok(()) => writeln!(out, "PASS partition pockets={}", pockets.len())?,
        Err(defect) => {
            writeln!(out, "FAIL partition {defect:?}")?;
            failed.push("partition");
        }
    }

    let mut checked = 0u64;
    let mut broken = None;
    for k in 1.. {
        match count_identity(k, &oracle) {
            Ok(c) if c.holds() => checked += 1,
            Ok(c) => {
                broken = Some(c);
                break;
            }
            Err(_) => break,
        }
    }
    match broken {
        None => writeln!(out, "PASS count_identity checked={checked}")?,
        Some(c) => {
            writeln!(out, "FAIL count_identity k={} lhs={} rhs={}", c.k, c.lhs, c.rhs)?;
            failed.push("count_identity");
        }
    }

    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::check(format!("verification failed: {}", failed.join(", "))))
    }
}

fn cmd_twins(args: &TwinsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    if args.pockets == 0 {
        return Err(Failure::usage("--pockets must be at least 1"));
    }
    let stream = PocketStream::with_config(args.method, args.sieve.stream_config());
    let pockets = collect_run(stream, Some(args.pockets))?;
    let census = verify::twin_census_run(&pockets);

    writeln!(out, "{:>4} {:>24} {:>10} {:>10}  boundary", "j", "interval", "order", "twins")?;
    let mut csv = String::from("j,lo,hi,order,twin_pairs,boundary_pair\n");
    for (p, c) in pockets.iter().zip(&census) {
        let boundary = c.boundary_pair.map_or(String::new(), |(a, b)| format!("{a}/{b}"));
        writeln!(
            out,
            "{:>4} {:>24} {:>10} {:>10}  {}",
            p.index,
            p.interval.to_string(),
            p.order(),
            c.count(),
            boundary
        )?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.index,
            p.interval.lo(),
            p.interval.hi(),
            p.order(),
            c.count(),
            boundary
        ));
    }
    if let Some(path) = &args.csv {
        fs::write(path, csv)?;
    }
    if args.method == MethodKind::SquarePlus {
        if let Some(c) = census.iter().find(|c| c.pocket_index >= 2 && c.count() == 0) {
            return Err(Failure::check(format!("standard pocket {} has no twin pair", c.pocket_index)));
        }
    }
    Ok(())
}

fn cmd_tightness(args: &TightnessArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let state = match &args.seed_file {
        Some(path) => read_seed_file(path)?,
        None => {
            if args.pockets == 0 {
                return Err(Failure::usage("--pockets must be at least 1"));
            }
            let mut stream = PocketStream::new(MethodKind::SquarePlus);
            while stream.next_index() <= args.pockets {
                stream.next_pocket()?;
            }
            stream.into_state()
        }
    };
    let mpp = state.frontier_max_prime();
    writeln!(
        out,
        "frontier MIpP={} MpP={} extra={}",
        state.frontier_interval_hi(),
        mpp,
        args.extra
    )?;
    match tightness_demo(&state, args.extra)? {
        Tightness::Works { top } => {
            writeln!(out, "works (top = {top})")?;
            Ok(())
        }
        Tightness::FailsAt { fails_at, top } => {
            writeln!(out, "fails_at {fails_at} (top = {top})")?;
            let expected = (mpp + 2) * (mpp + 2);
            if args.extra == 4 && fails_at == expected {
                Ok(())
            } else {
                Err(Failure::check(format!("unexpected false prime {fails_at}")))
            }
        }
    }
}

fn cmd_zeta(args: &ZetaArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let r = zeta::euler_residual(args.z, args.k, args.trunc)?;
    writeln!(out, "z={} k={} truncation={}", args.z, args.k, args.trunc)?;
    writeln!(out, "product_side  {:.15}", r.product_side)?;
    writeln!(out, "survivor_side {:.15}", r.survivor_side)?;
    writeln!(out, "gap           {:.3e}", r.gap)?;
    writeln!(out, "tail_bound    {:.3e}", r.tail_bound)?;
    if let Some(path) = &args.csv {
        fs::write(
            path,
            format!(
                "z,k,truncation,product_side,survivor_side,gap,tail_bound\n{},{},{},{:e},{:e},{:e},{:e}\n",
                args.z, args.k, args.trunc, r.product_side, r.survivor_side, r.gap, r.tail_bound
            ),
        )?;
    }
    if r.within_bound() {
        writeln!(out, "PASS gap below tail bound")?;
        Ok(())
    } else {
        writeln!(out, "FAIL gap above tail bound")?;
        Err(Failure::check("Euler residual exceeds the tail bound"))
    }
}
