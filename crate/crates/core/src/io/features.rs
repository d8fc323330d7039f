//! `.gsf` feature files:
//!
//! ```text
//! "GSF1" | u32 N | u32 D | f32 frame_period_ms | N*D f32 payload (frame-major)
//! ```
//!
//! All numbers little-endian.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::FrameSequence;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"GSF1";
const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureHeader {
    pub num_frames: u32,
    pub dim: u32,
    pub frame_period_ms: f32,
}

fn parse_header(bytes: &[u8]) -> Result<FeatureHeader> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        let found = &bytes[..bytes.len().min(4)];
        if found.len() == 4 && &found[..3] == b"GSF" {
            return Err(Error::format(format!(
                "unsupported .gsf version byte {:?}",
                found[3] as char
            )));
        }
        return Err(Error::format("missing GSF1 magic"));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Length(format!(
            "header truncated: {} of {HEADER_LEN} bytes",
            bytes.len()
        )));
    }
    let word = |i: usize| [bytes[i], bytes[i + 1], bytes[i + 2], bytes[i + 3]];
    Ok(FeatureHeader {
        num_frames: u32::from_le_bytes(word(4)),
        dim: u32::from_le_bytes(word(8)),
        frame_period_ms: f32::from_le_bytes(word(12)),
    })
}

/// Read only the 16-byte header.
pub fn read_header(path: impl AsRef<Path>) -> Result<FeatureHeader> {
    let path = path.as_ref();
    let mut buf = Vec::with_capacity(HEADER_LEN);
    fs::File::open(path)
        .and_then(|f| f.take(HEADER_LEN as u64).read_to_end(&mut buf))
        .map_err(|e| Error::io(path, e))?;
    parse_header(&buf)
}

/// Decode a whole `.gsf` buffer. The utterance id is left empty.
pub fn decode(bytes: &[u8]) -> Result<FrameSequence<f32>> {
    let header = parse_header(bytes)?;
    let (n, d) = (header.num_frames as usize, header.dim as usize);
    if n == 0 || d == 0 {
        return Err(Error::data(format!("empty feature matrix ({n}x{d})")));
    }
    let expected = n
        .checked_mul(d)
        .and_then(|c| c.checked_mul(4))
        .ok_or_else(|| Error::format("header dimensions overflow"))?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != expected {
        return Err(Error::Length(format!(
            "header declares {n}x{d} ({expected} bytes) but payload has {} bytes",
            payload.len()
        )));
    }
    let data = payload
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    FrameSequence::new(String::new(), data, d, header.frame_period_ms)
}

/// Encode a sequence into `.gsf` bytes.
pub fn encode(seq: &FrameSequence<f32>) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + seq.as_slice().len() * 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(seq.num_frames() as u32).to_le_bytes());
    out.extend_from_slice(&(seq.dim() as u32).to_le_bytes());
    out.extend_from_slice(&seq.frame_period_ms().to_le_bytes());
    for v in seq.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

/// Read a feature file. The utterance id is taken from the file stem.
pub fn read_features(path: impl AsRef<Path>) -> Result<FrameSequence<f32>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut seq = decode(&bytes).map_err(|e| match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        Error::Length(m) => Error::Length(format!("{}: {m}", path.display())),
        Error::Data(m) => Error::Data(format!("{}: {m}", path.display())),
        other => other,
    })?;
    if let Some(stem) = path.file_stem() {
        seq.set_utterance_id(stem.to_string_lossy());
    }
    Ok(seq)
}

pub fn write_features(seq: &FrameSequence<f32>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&encode(seq)).map_err(|e| Error::io(path, e))
}
