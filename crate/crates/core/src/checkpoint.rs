//! Restart manifests for long generation runs.
//!
//! A checkpoint is a flat `key=value` text file written after every completed
//! pocket. It records the frontier and the length and SHA-256 of the prime
//! file at that moment, so a run killed mid-pocket can cut the file back to
//! the last boundary and continue with byte-identical output.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::MethodKind;
use crate::format::Format;

const VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("checkpoint i/o: {0}")]
    Io(#[from] io::Error),
    #[error("checkpoint line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("checkpoint is missing `{0}`")]
    Missing(&'static str),
    #[error("prime file checksum mismatch: expected {expected}, found {found}")]
    Checksum { expected: String, found: String },
    #[error("prime file is shorter ({actual} bytes) than the checkpoint ({expected} bytes)")]
    Truncated { expected: u64, actual: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub method: MethodKind,
    /// Index the next pocket will carry.
    pub next_index: u64,
    pub frontier_mipp: u64,
    pub frontier_mpp: u64,
    pub cumulative: u64,
    pub prime_file: PathBuf,
    pub format: Format,
    /// Bytes of the prime file covered by `checksum`.
    pub prime_file_len: u64,
    /// Hex SHA-256 of the first `prime_file_len` bytes.
    pub checksum: String,
}

impl Checkpoint {
    pub fn to_manifest(&self) -> String {
        format!(
            "version={VERSION}\nmethod={}\nnext_index={}\nfrontier_mipp={}\nfrontier_mpp={}\ncumulative={}\n\
             prime_file={}\nformat={}\nprime_file_len={}\nchecksum=sha256:{}\n",
            self.method,
            self.next_index,
            self.frontier_mipp,
            self.frontier_mpp,
            self.cumulative,
            self.prime_file.display(),
            self.format,
            self.prime_file_len,
            self.checksum
        )
    }

    pub fn parse(text: &str) -> Result<Self, CheckpointError> {
        let mut method = None;
        let mut next_index = None;
        let mut mipp = None;
        let mut mpp = None;
        let mut cumulative = None;
        let mut prime_file = None;
        let mut format = None;
        let mut len = None;
        let mut checksum = None;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let bad = |reason: String| CheckpointError::Parse { line: line_no, reason };
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value".into()))?;
            let num = || value.parse::<u64>().map_err(|e| bad(format!("{key}: {e}")));
            match key {
                "version" if value == VERSION => {}
                "version" => return Err(bad(format!("unsupported version {value}"))),
                "method" => method = Some(value.parse::<MethodKind>().map_err(bad)?),
                "next_index" => next_index = Some(num()?),
                "frontier_mipp" => mipp = Some(num()?),
                "frontier_mpp" => mpp = Some(num()?),
                "cumulative" => cumulative = Some(num()?),
                "prime_file" => prime_file = Some(PathBuf::from(value)),
                "format" => format = Some(value.parse::<Format>().map_err(bad)?),
                "prime_file_len" => len = Some(num()?),
                "checksum" => {
                    let hex = value
                        .strip_prefix("sha256:")
                        .ok_or_else(|| bad("checksum must be sha256:<hex>".into()))?;
                    checksum = Some(hex.to_string());
                }
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        Ok(Checkpoint {
            method: method.ok_or(CheckpointError::Missing("method"))?,
            next_index: next_index.ok_or(CheckpointError::Missing("next_index"))?,
            frontier_mipp: mipp.ok_or(CheckpointError::Missing("frontier_mipp"))?,
            frontier_mpp: mpp.ok_or(CheckpointError::Missing("frontier_mpp"))?,
            cumulative: cumulative.ok_or(CheckpointError::Missing("cumulative"))?,
            prime_file: prime_file.ok_or(CheckpointError::Missing("prime_file"))?,
            format: format.ok_or(CheckpointError::Missing("format"))?,
            prime_file_len: len.ok_or(CheckpointError::Missing("prime_file_len"))?,
            checksum: checksum.ok_or(CheckpointError::Missing("checksum"))?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes the manifest through a temporary file and a rename, so a crash
    /// leaves either the old or the new manifest.
    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_manifest())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Reads the checkpointed prefix of the prime file and checks its digest.
    pub fn read_verified_prefix(&self) -> Result<Vec<u8>, CheckpointError> {
        let mut file = fs::File::open(&self.prime_file)?;
        let actual = file.metadata()?.len();
        if actual < self.prime_file_len {
            return Err(CheckpointError::Truncated {
                expected: self.prime_file_len,
                actual,
            });
        }
        let mut buf = Vec::with_capacity(self.prime_file_len as usize);
        file.by_ref().take(self.prime_file_len).read_to_end(&mut buf)?;
        let found = sha256_hex(&buf);
        if found != self.checksum {
            return Err(CheckpointError::Checksum {
                expected: self.checksum.clone(),
                found,
            });
        }
        Ok(buf)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of the first `len` bytes of a file.
pub fn file_prefix_digest(path: &Path, len: u64) -> io::Result<String> {
    let mut hasher = Sha256::new();
    let file = fs::File::open(path)?;
    io::copy(&mut file.take(len), &mut hasher)?;
    Ok(hex::encode(hasher.finalize()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        Checkpoint {
            method: MethodKind::SquarePlus,
            next_index: 4,
            frontier_mipp: 624,
            frontier_mpp: 619,
            cumulative: 114,
            prime_file: PathBuf::from("/tmp/primes.bin"),
            format: Format::Bin,
            prime_file_len: 12 + 8 * 114,
            checksum: sha256_hex(b"abc"),
        }
    }

    #[test]
    fn manifest_round_trip() {
        let c = sample();
        assert_eq!(Checkpoint::parse(&c.to_manifest()).unwrap(), c);
    }

    #[test]
    fn manifest_errors() {
        assert!(matches!(Checkpoint::parse("method=3\n"), Err(CheckpointError::Missing(_))));
        assert!(matches!(
            Checkpoint::parse("bogus=1\n"),
            Err(CheckpointError::Parse { line: 1, .. })
        ));
        let text = sample().to_manifest().replace("version=1", "version=9");
        assert!(matches!(Checkpoint::parse(&text), Err(CheckpointError::Parse { .. })));
    }

    #[test]
    fn digest_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn verified_prefix() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        fs::write(&path, b"2\n3\n5\n7\n").unwrap();
        let mut c = sample();
        c.prime_file = path.clone();
        c.format = Format::Text;
        c.prime_file_len = 4;
        c.checksum = file_prefix_digest(&path, 4).unwrap();
        assert_eq!(c.read_verified_prefix().unwrap(), b"2\n3\n");
        c.checksum = sha256_hex(b"nope");
        assert!(matches!(c.read_verified_prefix(), Err(CheckpointError::Checksum { .. })));
        c.prime_file_len = 100;
        assert!(matches!(c.read_verified_prefix(), Err(CheckpointError::Truncated { .. })));
    }
}
