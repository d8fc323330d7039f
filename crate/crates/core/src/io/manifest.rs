use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_features, read_header, time_to_frame, BoundarySet, FrameSequence};
use crate::error::{Error, Result};

/// One manifest line. `features` is resolved relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub utterance_id: String,
    pub features: PathBuf,
    pub num_frames: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundaries_ms: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
    base_dir: PathBuf,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !seen.insert(e.utterance_id.as_str()) {
                return Err(Error::data(format!(
                    "duplicate utterance id {:?} in manifest",
                    e.utterance_id
                )));
            }
            if let Some(b) = &e.boundaries_ms {
                if b.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
                    return Err(Error::data(format!(
                        "{}: boundary times must be finite and non-negative",
                        e.utterance_id
                    )));
                }
            }
        }
        Ok(Self {
            entries,
            base_dir: base_dir.into(),
        })
    }

    /// Parse JSON-lines text; blank lines are skipped.
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let e: ManifestEntry = serde_json::from_str(line)
                .map_err(|err| Error::format(format!("manifest line {}: {err}", i + 1)))?;
            entries.push(e);
        }
        Self::new(entries, base_dir)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("manifest entry serializes"));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::File::create(path)
            .and_then(|mut f| f.write_all(self.to_text().as_bytes()))
            .map_err(|e| Error::io(path, e))
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    pub fn has_ground_truth(&self) -> bool {
        self.entries.iter().all(|e| e.boundaries_ms.is_some())
    }

    /// Copy of the manifest with every ground-truth field removed.
    pub fn without_ground_truth(&self) -> Self {
        let mut m = self.clone();
        for e in &mut m.entries {
            e.boundaries_ms = None;
        }
        m
    }

    pub fn feature_path(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.features.is_absolute() {
            entry.features.clone()
        } else {
            self.base_dir.join(&entry.features)
        }
    }

    /// Load an entry's features, checking the header against `num_frames`.
    pub fn load_features(&self, entry: &ManifestEntry) -> Result<FrameSequence<f32>> {
        let mut seq = read_features(self.feature_path(entry))?;
        if seq.num_frames() != entry.num_frames {
            return Err(Error::data(format!(
                "{}: manifest says {} frames, file has {}",
                entry.utterance_id,
                entry.num_frames,
                seq.num_frames()
            )));
        }
        seq.set_utterance_id(entry.utterance_id.clone());
        Ok(seq)
    }

    /// Check every entry's `num_frames` against its file header.
    pub fn verify_headers(&self) -> Result<()> {
        for e in &self.entries {
            let h = read_header(self.feature_path(e))?;
            if h.num_frames as usize != e.num_frames {
                return Err(Error::data(format!(
                    "{}: manifest says {} frames, header has {}",
                    e.utterance_id, e.num_frames, h.num_frames
                )));
            }
        }
        Ok(())
    }

    /// Ground-truth boundaries of an entry in frames.
    ///
    /// Times are rounded to frames; anything landing on frame 0 or past the
    /// last frame is an utterance endpoint and is dropped, as are duplicates.
    pub fn ground_truth(&self, entry: &ManifestEntry, frame_period_ms: f64) -> Result<BoundarySet> {
        let times = entry.boundaries_ms.as_ref().ok_or_else(|| {
            Error::data(format!("{}: no ground-truth boundaries", entry.utterance_id))
        })?;
        let mut frames: Vec<usize> = times
            .iter()
            .map(|&t| time_to_frame(t, frame_period_ms))
            .filter(|&f| f > 0 && f < entry.num_frames)
            .collect();
        frames.sort_unstable();
        frames.dedup();
        BoundarySet::new(entry.utterance_id.clone(), frames, entry.num_frames)
    }
}
