//! Prime list and report encodings.
//!
//! * text: one ASCII decimal per line, `\n` terminated, no header.
//! * bin: magic `PPK1`, prime count as `u64` little-endian, then each prime
//!   as `u64` little-endian in ascending order.
//! * csv-report: one row per pocket under [`CSV_HEADER`].

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::domain::Pocket;
use crate::verify::TwinCensus;

pub const MAGIC: &[u8; 4] = b"PPK1";
pub const BIN_HEADER_LEN: u64 = 12;
pub const CSV_HEADER: &str = "j,lo,hi,order,max_prime,first_ordinal,twin_pairs,truncated";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Text,
    Bin,
    CsvReport,
}

impl Format {
    pub fn tag(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Bin => "bin",
            Format::CsvReport => "csv-report",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "bin" => Ok(Format::Bin),
            "csv-report" => Ok(Format::CsvReport),
            other => Err(format!("unknown format `{other}` (expected text, bin or csv-report)")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing PPK1 magic")]
    BadMagic,
    #[error("binary file is {len} bytes; header declares {count} primes")]
    LengthMismatch { len: usize, count: u64 },
    #[error("line {line}: `{text}` is not an unsigned integer")]
    BadLine { line: usize, text: String },
    #[error("text prime list must end with a newline")]
    MissingNewline,
}

pub fn write_text<W: Write>(mut w: W, primes: &[u64]) -> io::Result<()> {
    for p in primes {
        writeln!(w, "{p}")?;
    }
    Ok(())
}

pub fn encode_text(primes: &[u64]) -> Vec<u8> {
    let mut out = Vec::new();
    write_text(&mut out, primes).expect("writing to a Vec cannot fail");
    out
}

pub fn parse_text(text: &str) -> Result<Vec<u64>, FormatError> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(FormatError::MissingNewline);
    }
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            l.parse::<u64>().map_err(|_| FormatError::BadLine {
                line: i + 1,
                text: l.to_string(),
            })
        })
        .collect()
}

pub fn bin_header(count: u64) -> [u8; 12] {
    let mut h = [0u8; 12];
    h[..4].copy_from_slice(MAGIC);
    h[4..].copy_from_slice(&count.to_le_bytes());
    h
}

pub fn encode_bin(primes: &[u64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 8 * primes.len());
    out.extend_from_slice(&bin_header(primes.len() as u64));
    primes.iter().for_each(|p| out.extend_from_slice(&p.to_le_bytes()));
    out
}

pub fn decode_bin(bytes: &[u8]) -> Result<Vec<u64>, FormatError> {
    if bytes.len() < 12 || &bytes[..4] != MAGIC {
        return Err(FormatError::BadMagic);
    }
    let count = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let body = &bytes[12..];
    if (body.len() as u64) != count.saturating_mul(8) {
        return Err(FormatError::LengthMismatch { len: bytes.len(), count });
    }
    Ok(body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// One line of a pocket report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PocketReportRow {
    pub j: u64,
    pub lo: u64,
    pub hi: u64,
    pub order: u64,
    pub max_prime: Option<u64>,
    pub first_ordinal: u64,
    pub twin_pairs: u64,
    pub truncated: bool,
}

impl PocketReportRow {
    pub fn new(pocket: &Pocket, census: &TwinCensus) -> Self {
        debug_assert_eq!(pocket.index, census.pocket_index);
        PocketReportRow {
            j: pocket.index,
            lo: pocket.interval.lo(),
            hi: pocket.interval.hi(),
            order: pocket.order(),
            max_prime: pocket.max_prime(),
            first_ordinal: pocket.first_ordinal,
            twin_pairs: census.count() as u64,
            truncated: pocket.truncated,
        }
    }

    /// CSV line without the trailing newline. An empty pocket leaves
    /// `max_prime` blank.
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.j,
            self.lo,
            self.hi,
            self.order,
            self.max_prime.map(|m| m.to_string()).unwrap_or_default(),
            self.first_ordinal,
            self.twin_pairs,
            self.truncated
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bin_layout_is_exact() {
        let bytes = encode_bin(&[2, 3, 5]);
        assert_eq!(&bytes[..4], b"PPK1");
        assert_eq!(&bytes[4..12], &3u64.to_le_bytes());
        assert_eq!(&bytes[12..20], &[2, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(bytes.len(), 12 + 24);
    }

    #[test]
    fn text_layout_is_exact() {
        assert_eq!(encode_text(&[2, 3, 619]), b"2\n3\n619\n");
        assert_eq!(parse_text("").unwrap(), Vec::<u64>::new());
        assert_eq!(parse_text("2\n3"), Err(FormatError::MissingNewline));
        assert!(matches!(parse_text("2\nx\n"), Err(FormatError::BadLine { line: 2, .. })));
    }

    #[test]
    fn bad_binary() {
        assert_eq!(decode_bin(b"PPK0\0\0\0\0\0\0\0\0"), Err(FormatError::BadMagic));
        let mut b = encode_bin(&[2, 3]);
        b.pop();
        assert!(matches!(decode_bin(&b), Err(FormatError::LengthMismatch { .. })));
    }

    #[test]
    fn csv_row() {
        let row = PocketReportRow {
            j: 2,
            lo: 4,
            hi: 24,
            order: 7,
            max_prime: Some(23),
            first_ordinal: 3,
            twin_pairs: 3,
            truncated: false,
        };
        assert_eq!(row.to_csv(), "2,4,24,7,23,3,3,false");
        let empty = PocketReportRow { max_prime: None, order: 0, ..row };
        assert_eq!(empty.to_csv(), "2,4,24,0,,3,3,false");
    }

    proptest! {
        #[test]
        fn bin_and_text_agree(mut v in proptest::collection::vec(any::<u64>(), 0..200)) {
            v.sort_unstable();
            v.dedup();
            let from_bin = decode_bin(&encode_bin(&v)).unwrap();
            let text = String::from_utf8(encode_text(&v)).unwrap();
            prop_assert_eq!(&from_bin, &parse_text(&text).unwrap());
            prop_assert_eq!(from_bin, v);
        }
    }
}
