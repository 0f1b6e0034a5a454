//! Instance files, subinstance splitting and CSV reports.
//!
//! Text format: one decimal integer per line, each terminated by `\n`.
//!
//! Binary format (little-endian):
//!
//! | offset | size  | content                    |
//! |--------|-------|----------------------------|
//! | 0      | 4     | magic `ASRT`               |
//! | 4      | 1     | version, currently 1       |
//! | 5      | 8     | element count `u64`        |
//! | 13     | 8 * n | elements, `i64` each       |

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::bench::BenchmarkReport;
use crate::instance::SortedInstance;

pub const MAGIC: [u8; 4] = *b"ASRT";
pub const VERSION: u8 = 1;
pub const CSV_HEADER: [&str; 7] = [
    "distribution",
    "n",
    "algorithm",
    "accesses_per_query",
    "iterations_per_query",
    "time_ns_per_query",
    "stddev_accesses",
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: cannot parse {text:?} as a 64-bit integer")]
    Parse { line: usize, text: String },
    #[error("not strictly increasing at line {line}")]
    UnsortedLine { line: usize },
    #[error("not strictly increasing at element {index}")]
    UnsortedElement { index: usize },
    #[error("file holds no values")]
    Empty,
    #[error("bad magic bytes, not a binary instance file")]
    BadMagic,
    #[error("unsupported binary instance version {0}")]
    UnsupportedVersion(u8),
    #[error("binary payload declares {declared} values but holds {actual} bytes of data")]
    Truncated { declared: u64, actual: usize },
    #[error("chunk size must be at least 2, got {0}")]
    ChunkTooSmall(usize),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Format::Text),
            "binary" | "bin" => Ok(Format::Binary),
            other => Err(format!("unknown format {other:?} (expected text or binary)")),
        }
    }
}

impl Format {
    /// Binary if the file starts with the magic bytes, text otherwise.
    pub fn sniff(path: &Path) -> io::Result<Format> {
        let mut head = [0u8; 4];
        let mut file = File::open(path)?;
        let mut filled = 0;
        while filled < head.len() {
            match file.read(&mut head[filled..])? {
                0 => break,
                k => filled += k,
            }
        }
        Ok(if filled == 4 && head == MAGIC { Format::Binary } else { Format::Text })
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Binary => "bin",
        }
    }
}

pub fn read_instance(path: &Path, format: Format, normalize: bool) -> Result<SortedInstance, DatasetError> {
    let reader = BufReader::new(File::open(path)?);
    match format {
        Format::Text => read_text(reader, normalize),
        Format::Binary => read_binary(reader, normalize),
    }
}

pub fn write_instance(instance: &SortedInstance, path: &Path, format: Format) -> Result<(), DatasetError> {
    let mut out = BufWriter::new(File::create(path)?);
    match format {
        Format::Text => write_text(instance, &mut out)?,
        Format::Binary => write_binary(instance, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

/// Parses newline-delimited integers. Blank lines and surrounding
/// whitespace are ignored.
pub fn read_text<R: BufRead>(reader: R, normalize: bool) -> Result<SortedInstance, DatasetError> {
    let mut values = Vec::new();
    let mut previous: Option<i64> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let value: i64 = text.parse().map_err(|_| DatasetError::Parse {
            line: i + 1,
            text: text.to_string(),
        })?;
        if !normalize && previous.is_some_and(|p| p >= value) {
            return Err(DatasetError::UnsortedLine { line: i + 1 });
        }
        previous = Some(value);
        values.push(value);
    }
    finish(values, normalize)
}

pub fn read_binary<R: Read>(mut reader: R, normalize: bool) -> Result<SortedInstance, DatasetError> {
    let mut header = [0u8; 13];
    reader.read_exact(&mut header).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => DatasetError::BadMagic,
        _ => DatasetError::Io(e),
    })?;
    if header[..4] != MAGIC {
        return Err(DatasetError::BadMagic);
    }
    if header[4] != VERSION {
        return Err(DatasetError::UnsupportedVersion(header[4]));
    }
    let declared = u64::from_le_bytes(header[5..13].try_into().expect("8 bytes"));
    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    if declared.checked_mul(8) != Some(payload.len() as u64) {
        return Err(DatasetError::Truncated {
            declared,
            actual: payload.len(),
        });
    }
    let values: Vec<i64> = payload
        .chunks_exact(8)
        .map(|c| i64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    if !normalize {
        if let Some(k) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(DatasetError::UnsortedElement { index: k + 1 });
        }
    }
    finish(values, normalize)
}

fn finish(values: Vec<i64>, normalize: bool) -> Result<SortedInstance, DatasetError> {
    if values.is_empty() {
        return Err(DatasetError::Empty);
    }
    let instance = if normalize {
        SortedInstance::from_unsorted(values)
    } else {
        SortedInstance::new(values)
    };
    Ok(instance.expect("validated above"))
}

pub fn write_text<W: Write>(instance: &SortedInstance, out: &mut W) -> io::Result<()> {
    for v in instance.iter() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}

pub fn write_binary<W: Write>(instance: &SortedInstance, out: &mut W) -> io::Result<()> {
    out.write_all(&MAGIC)?;
    out.write_all(&[VERSION])?;
    out.write_all(&(instance.len() as u64).to_le_bytes())?;
    for v in instance.iter() {
        out.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Consecutive position-based chunks; a trailing partial chunk is dropped.
pub fn split_subinstances(instance: &SortedInstance, chunk_size: usize) -> Result<Vec<SortedInstance>, DatasetError> {
    if chunk_size < 2 {
        return Err(DatasetError::ChunkTooSmall(chunk_size));
    }
    Ok(instance
        .chunks_exact(chunk_size)
        .map(|c| SortedInstance::new(c.to_vec()).expect("a slice of a sorted instance is sorted"))
        .collect())
}

pub fn write_report_csv(report: &BenchmarkReport, path: &Path) -> Result<(), DatasetError> {
    write_report(report, File::create(path)?)
}

pub fn write_report<W: Write>(report: &BenchmarkReport, out: W) -> Result<(), DatasetError> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for row in &report.rows {
        writer.write_record([
            row.distribution.clone(),
            row.n.to_string(),
            row.algorithm.to_string(),
            row.mean_accesses_per_query.to_string(),
            row.mean_iterations_per_query.to_string(),
            row.mean_time_ns_per_query.to_string(),
            row.stddev_accesses.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}
