//! Flat result rows and their CSV / JSON encodings.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crystalft::decode::{NoiseParams, TrialStats};
use serde::{Deserialize, Serialize};

/// Column order of both encodings.
pub const COLUMNS: [&str; 13] = [
    "lattice", "L", "p_Z", "p_X", "p_m", "trials", "failures", "rate", "ci_lo", "ci_hi", "seed", "version", "timestamp",
];

/// One simulated noise point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub lattice: String,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "p_Z")]
    pub p_z: f64,
    #[serde(rename = "p_X")]
    pub p_x: f64,
    pub p_m: f64,
    pub trials: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
}

impl ResultRecord {
    pub fn new(lattice: &str, l: usize, noise: &NoiseParams, stats: &TrialStats, seed: u64, timestamp: &str) -> Self {
        let (ci_lo, ci_hi) = stats.wilson();
        ResultRecord {
            lattice: lattice.to_string(),
            l,
            p_z: noise.p_z,
            p_x: noise.p_x,
            p_m: noise.p_m,
            trials: stats.trials,
            failures: stats.failures,
            rate: stats.rate(),
            ci_lo,
            ci_hi,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, thiserror::Error)]
pub enum RecordError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn write_records<W: Write>(records: &[ResultRecord], format: Format, out: W) -> Result<(), RecordError> {
    match format {
        Format::Csv => {
            // Explicit header so an empty list still yields one.
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            w.write_record(COLUMNS)?;
            for r in records {
                w.serialize(r)?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Format::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, records)?;
            writeln!(out).map_err(serde_json::Error::io)?;
        }
    }
    Ok(())
}

pub fn read_records<R: Read>(format: Format, input: R) -> Result<Vec<ResultRecord>, RecordError> {
    match format {
        Format::Csv => {
            let mut r = csv::Reader::from_reader(input);
            Ok(r.deserialize().collect::<Result<_, _>>()?)
        }
        Format::Json => Ok(serde_json::from_reader(input)?),
    }
}

/// Writes `records` to `path`, or to standard output without one.
pub fn emit_results(records: &[ResultRecord], format: Format, path: Option<&Path>) -> Result<(), RecordError> {
    match path {
        None => write_records(records, format, io::stdout().lock()),
        Some(p) => {
            let f = File::create(p).map_err(|source| RecordError::Io { path: p.to_path_buf(), source })?;
            write_records(records, format, BufWriter::new(f))
        }
    }
}
