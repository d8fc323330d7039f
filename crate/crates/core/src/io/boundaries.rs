use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::frame_to_time;
use crate::error::{Error, Result};

/// Interior word boundaries of one utterance, as frame indices.
///
/// Utterance endpoints are implicit and never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySet {
    utterance_id: String,
    boundaries: Vec<usize>,
    total_frames: usize,
}

impl BoundarySet {
    pub fn new(
        utterance_id: impl Into<String>,
        boundaries: Vec<usize>,
        total_frames: usize,
    ) -> Result<Self> {
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::data("boundaries must be strictly increasing"));
        }
        if let Some(&last) = boundaries.last() {
            if last >= total_frames {
                return Err(Error::data(format!(
                    "boundary {last} outside utterance of {total_frames} frames"
                )));
            }
        }
        Ok(Self {
            utterance_id: utterance_id.into(),
            boundaries,
            total_frames,
        })
    }

    pub fn empty(utterance_id: impl Into<String>, total_frames: usize) -> Self {
        Self {
            utterance_id: utterance_id.into(),
            boundaries: Vec::new(),
            total_frames,
        }
    }

    pub fn utterance_id(&self) -> &str {
        &self.utterance_id
    }

    pub fn frames(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn total_frames(&self) -> usize {
        self.total_frames
    }

    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }
}

/// A boundary set together with the frame rate needed to report milliseconds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryRecord {
    pub boundaries: BoundarySet,
    pub frame_period_ms: f64,
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    utterance_id: String,
    total_frames: usize,
    frame_period_ms: f64,
    boundaries_frames: Vec<usize>,
    boundaries_ms: Vec<f64>,
}

impl BoundaryRecord {
    pub fn to_line(&self) -> String {
        let b = &self.boundaries;
        let line = RecordLine {
            utterance_id: b.utterance_id.clone(),
            total_frames: b.total_frames,
            frame_period_ms: self.frame_period_ms,
            boundaries_frames: b.boundaries.clone(),
            boundaries_ms: b
                .boundaries
                .iter()
                .map(|&f| frame_to_time(f, self.frame_period_ms))
                .collect(),
        };
        serde_json::to_string(&line).expect("boundary record serializes")
    }

    /// Parse one line. Frame indices are authoritative; the millisecond
    /// column is informational.
    pub fn from_line(line: &str) -> Result<Self> {
        let rec: RecordLine = serde_json::from_str(line)
            .map_err(|e| Error::format(format!("bad boundary record: {e}")))?;
        if !(rec.frame_period_ms.is_finite() && rec.frame_period_ms > 0.0) {
            return Err(Error::data("frame_period_ms must be positive"));
        }
        Ok(Self {
            boundaries: BoundarySet::new(rec.utterance_id, rec.boundaries_frames, rec.total_frames)?,
            frame_period_ms: rec.frame_period_ms,
        })
    }
}

pub fn write_boundary_file(path: impl AsRef<Path>, records: &[BoundaryRecord]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_line());
        out.push('\n');
    }
    fs::File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(|e| Error::io(path, e))
}

pub fn read_boundary_file(path: impl AsRef<Path>) -> Result<Vec<BoundaryRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec = BoundaryRecord::from_line(line).map_err(|e| match e {
            Error::Format(m) => Error::Format(format!("{}:{}: {m}", path.display(), i + 1)),
            other => other,
        })?;
        if !seen.insert(rec.boundaries.utterance_id().to_owned()) {
            return Err(Error::data(format!(
                "duplicate utterance id {:?} in {}",
                rec.boundaries.utterance_id(),
                path.display()
            )));
        }
        out.push(rec);
    }
    Ok(out)
}
