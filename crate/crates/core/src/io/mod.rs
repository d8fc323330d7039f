//! On-disk formats: `.gsf` frame-embedding files, JSON-lines manifests and
//! boundary files, plus millisecond/frame conversion.

mod boundaries;
mod features;
mod manifest;

pub use boundaries::{read_boundary_file, write_boundary_file, BoundaryRecord, BoundarySet};
pub use features::{read_features, read_header, write_features, FeatureHeader, MAGIC};
pub use manifest::{DatasetManifest, ManifestEntry};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Convert a time in milliseconds to the nearest frame index, ties away from zero.
pub fn time_to_frame(t_ms: f64, frame_period_ms: f64) -> usize {
    debug_assert!(t_ms >= 0.0 && frame_period_ms > 0.0);
    (t_ms / frame_period_ms).round() as usize
}

/// Start time of a frame in milliseconds.
pub fn frame_to_time(frame: usize, frame_period_ms: f64) -> f64 {
    frame as f64 * frame_period_ms
}

/// One utterance's N×D embedding matrix, frame-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence<T> {
    utterance_id: String,
    data: Vec<T>,
    num_frames: usize,
    dim: usize,
    frame_period_ms: f32,
}

impl<T: Scalar> FrameSequence<T> {
    /// Build from a flat frame-major buffer of `num_frames * dim` values.
    pub fn new(
        utterance_id: impl Into<String>,
        data: Vec<T>,
        dim: usize,
        frame_period_ms: f32,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::data("feature dimension must be at least 1"));
        }
        if data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::data(format!(
                "payload of {} values does not form whole frames of dimension {dim}",
                data.len()
            )));
        }
        if !(frame_period_ms.is_finite() && frame_period_ms > 0.0) {
            return Err(Error::data(format!(
                "frame period must be positive and finite, got {frame_period_ms}"
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::data(format!(
                "non-finite value at frame {}, dim {}",
                pos / dim,
                pos % dim
            )));
        }
        let num_frames = data.len() / dim;
        Ok(Self {
            utterance_id: utterance_id.into(),
            data,
            num_frames,
            dim,
            frame_period_ms,
        })
    }

    pub fn from_rows(
        utterance_id: impl Into<String>,
        rows: &[Vec<T>],
        frame_period_ms: f32,
    ) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::data("rows have inconsistent dimensions"));
        }
        let data = rows.iter().flatten().copied().collect();
        Self::new(utterance_id, data, dim, frame_period_ms)
    }

    pub fn utterance_id(&self) -> &str {
        &self.utterance_id
    }

    pub fn set_utterance_id(&mut self, id: impl Into<String>) {
        self.utterance_id = id.into();
    }

    pub fn num_frames(&self) -> usize {
        self.num_frames
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame_period_ms(&self) -> f32 {
        self.frame_period_ms
    }

    pub fn duration_ms(&self) -> f64 {
        self.num_frames as f64 * f64::from(self.frame_period_ms)
    }

    pub fn frame(&self, t: usize) -> &[T] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn frames(&self) -> std::slice::ChunksExact<'_, T> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    /// Same sequence at another precision.
    pub fn cast<U: Scalar>(&self) -> FrameSequence<U> {
        FrameSequence {
            utterance_id: self.utterance_id.clone(),
            data: self.data.iter().map(|v| U::of(v.as_f64())).collect(),
            num_frames: self.num_frames,
            dim: self.dim,
            frame_period_ms: self.frame_period_ms,
        }
    }

    /// Apply `f` to every frame vector, keeping metadata.
    pub fn map_frames(&self, mut f: impl FnMut(usize, &mut [T])) -> Self {
        let mut out = self.clone();
        for (t, row) in out.data.chunks_exact_mut(self.dim).enumerate() {
            f(t, row);
        }
        out
    }
}
