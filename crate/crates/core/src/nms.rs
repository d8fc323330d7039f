//! Greedy non-maxima suppression over a per-frame score vector.
//!
//! Frames are visited from the highest score down (equal scores: lower index
//! first). A frame is accepted while fewer than `K` frames are accepted and it
//! lies more than `r` frames from every accepted frame.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::io::BoundarySet;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NmsConfig {
    /// Average word duration; budgets `K = floor(duration / tau_avg_ms)`.
    pub tau_avg_ms: f64,
    /// Minimum word duration; the suppression radius.
    pub tau_min_ms: f64,
    /// Fixed boundary budget, overriding the duration-based one.
    pub fixed_word_count: Option<usize>,
}

impl Default for NmsConfig {
    fn default() -> Self {
        Self {
            tau_avg_ms: 300.0,
            tau_min_ms: 60.0,
            fixed_word_count: None,
        }
    }
}

impl NmsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_min_ms > 0.0 && self.tau_min_ms.is_finite()) {
            return Err(Error::argument("tau_min_ms must be positive"));
        }
        if self.fixed_word_count.is_none() {
            if !(self.tau_avg_ms > 0.0 && self.tau_avg_ms.is_finite()) {
                return Err(Error::argument("tau_avg_ms must be positive"));
            }
            if self.tau_min_ms > self.tau_avg_ms {
                return Err(Error::argument("tau_min_ms must not exceed tau_avg_ms"));
            }
        }
        if self.fixed_word_count == Some(0) {
            return Err(Error::argument("fixed word count must be at least 1"));
        }
        Ok(())
    }

    /// Boundary budget for an utterance of `num_frames` frames.
    pub fn budget(&self, num_frames: usize, frame_period_ms: f64) -> usize {
        self.fixed_word_count.unwrap_or_else(|| {
            ((num_frames as f64 * frame_period_ms / self.tau_avg_ms).floor() as usize).max(1)
        })
    }

    /// Suppression radius in frames.
    pub fn radius(&self, frame_period_ms: f64) -> usize {
        (self.tau_min_ms / frame_period_ms).round() as usize
    }
}

/// Indices accepted by the greedy scan, ascending. Scores must be finite.
pub fn select_peaks<T: Scalar>(scores: &[T], budget: usize, radius: usize) -> Vec<usize> {
    let n = scores.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut blocked = vec![false; n];
    let mut picked = Vec::with_capacity(budget.min(n));
    for t in order {
        if picked.len() >= budget {
            break;
        }
        if blocked[t] {
            continue;
        }
        picked.push(t);
        let lo = t.saturating_sub(radius);
        let hi = (t + radius).min(n - 1);
        blocked[lo..=hi].iter_mut().for_each(|b| *b = true);
    }
    picked.sort_unstable();
    picked
}

pub fn detect_peaks<T: Scalar>(
    utterance_id: &str,
    scores: &[T],
    frame_period_ms: f64,
    cfg: &NmsConfig,
) -> Result<BoundarySet> {
    if scores.is_empty() {
        return Err(Error::argument(format!("{utterance_id}: empty score vector")));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::argument(format!("{utterance_id}: non-finite score")));
    }
    if !(frame_period_ms > 0.0) {
        return Err(Error::argument("frame period must be positive"));
    }
    cfg.validate()?;
    let k = cfg.budget(scores.len(), frame_period_ms);
    let r = cfg.radius(frame_period_ms);
    BoundarySet::new(utterance_id, select_peaks(scores, k, r), scores.len())
}
