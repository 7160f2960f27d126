//! Append-only JSON-lines store of found functions.
//!
//! Each line is one object
//! `{"id", "n", "lut", "signature", "provenance", "timestamp"}` written
//! with a single `write` call, so concurrent appenders never interleave
//! within a line. Loading keeps the first record per signature.

use std::collections::BTreeSet;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ortho::InvariantSignature;
use crate::vbf::Vbf;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredRecord {
    pub id: String,
    pub n: usize,
    /// Concatenated fixed-width hex entries.
    pub lut: String,
    pub signature: String,
    pub provenance: String,
    pub timestamp: u64,
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set (for
/// reproducible output).
pub fn timestamp_now() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl StoredRecord {
    pub fn new(id: impl Into<String>, f: &Vbf, provenance: impl Into<String>) -> Result<Self> {
        let w = f.m().div_ceil(4);
        let lut = f.table().iter().map(|v| format!("{v:0w$x}")).collect();
        Ok(StoredRecord {
            id: id.into(),
            n: f.n(),
            lut,
            signature: InvariantSignature::of(f)?.to_string(),
            provenance: provenance.into(),
            timestamp: timestamp_now(),
        })
    }

    /// The stored table, read back as a square function.
    pub fn function(&self) -> Result<Vbf> {
        let w = self.n.div_ceil(4);
        let size = 1usize << self.n;
        if self.lut.len() != size * w || !self.lut.is_ascii() {
            return Err(Error::Usage(format!("record {} has a malformed table", self.id)));
        }
        let table = (0..size)
            .map(|k| u32::from_str_radix(&self.lut[k * w..(k + 1) * w], 16))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Usage(format!("record {} has a non-hex table", self.id)))?;
        Vbf::new(self.n, self.n, table)
    }

    pub fn parsed_signature(&self) -> Result<InvariantSignature> {
        self.signature.parse()
    }
}

/// Appends records, one line each.
pub fn append_records(path: &Path, records: &[StoredRecord]) -> Result<()> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        let mut line = serde_json::to_string(r)?;
        line.push('\n');
        file.write_all(line.as_bytes())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub records: Vec<StoredRecord>,
    /// Lines that did not parse as a record.
    pub malformed: usize,
    /// Well-formed records dropped because their signature was seen.
    pub duplicates: usize,
}

pub fn load_records(path: &Path) -> Result<LoadReport> {
    let file = std::fs::File::open(path)?;
    let mut report = LoadReport::default();
    let mut seen = BTreeSet::new();
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<StoredRecord>(&line) {
            Ok(r) if r.parsed_signature().is_ok() => {
                if seen.insert(r.signature.clone()) {
                    report.records.push(r);
                } else {
                    report.duplicates += 1;
                }
            }
            _ => report.malformed += 1,
        }
    }
    Ok(report)
}
