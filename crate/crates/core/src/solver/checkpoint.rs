//! Factor checkpoints.
//!
//! A checkpoint is one line of JSON, `{"n", "k", "seed", "objective"}`,
//! followed by the `n·k` entries of σ as little-endian `f64`, row-major.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SphereFactor;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub objective: f64,
}

pub fn write<W: Write>(mut w: W, factor: &SphereFactor, seed: u64, objective: f64) -> Result<()> {
    let header = CheckpointHeader {
        n: factor.n(),
        k: factor.k(),
        seed,
        objective,
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(factor.as_slice().len() * 8);
    for v in factor.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    w.flush()?;
    Ok(())
}

pub fn read<R: BufRead>(mut r: R) -> Result<(CheckpointHeader, SphereFactor)> {
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(Error::Format("checkpoint header is not newline-terminated".into()));
    }
    let header: CheckpointHeader = serde_json::from_slice(&line)?;
    let len = header
        .n
        .checked_mul(header.k)
        .and_then(|l| l.checked_mul(8))
        .ok_or_else(|| Error::Format("checkpoint dimensions overflow".into()))?;
    let mut bytes = Vec::with_capacity(len);
    r.read_to_end(&mut bytes)?;
    if bytes.len() != len {
        return Err(Error::Format(format!(
            "checkpoint body has {} bytes, expected {len}",
            bytes.len()
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let factor = SphereFactor::new(header.n, header.k, data)?;
    Ok((header, factor))
}

pub fn save(path: &Path, factor: &SphereFactor, seed: u64, objective: f64) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write(std::io::BufWriter::new(file), factor, seed, objective)
}

pub fn load(path: &Path) -> Result<(CheckpointHeader, SphereFactor)> {
    read(std::io::BufReader::new(std::fs::File::open(path)?))
}
