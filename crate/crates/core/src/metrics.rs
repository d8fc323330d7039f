//! Boundary matching and corpus-level segmentation scores: precision, recall,
//! F1, over-segmentation (OS) and R-value.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::BoundarySet;
use crate::scalar::Scalar;

/// One-to-one greedy matching. Reference boundaries are visited in ascending
/// order; each takes the nearest still-unmatched hypothesis within tolerance,
/// preferring the earlier one on equal distance.
pub fn match_boundaries(
    reference: &BoundarySet,
    hypothesis: &BoundarySet,
    tolerance_ms: f64,
    frame_period_ms: f64,
) -> usize {
    let hyp = hypothesis.frames();
    let mut used = vec![false; hyp.len()];
    let mut hits = 0;
    for &r in reference.frames() {
        let mut best: Option<(usize, usize)> = None;
        for (j, &h) in hyp.iter().enumerate() {
            if used[j] {
                continue;
            }
            let dist = r.abs_diff(h);
            if dist as f64 * frame_period_ms > tolerance_ms + 1e-9 {
                continue;
            }
            if best.is_none_or(|(_, d)| dist < d) {
                best = Some((j, dist));
            }
        }
        if let Some((j, _)) = best {
            used[j] = true;
            hits += 1;
        }
    }
    hits
}

/// Over-segmentation and R-value from fractional precision and recall.
/// Returns `None` when precision is zero.
pub fn os_and_r_value<T: Scalar>(precision: T, recall: T) -> Option<(T, T)> {
    if !(precision > T::zero()) {
        return None;
    }
    let one = T::one();
    let os = recall / precision - one;
    let r1 = ((one - recall).powi(2) + os.powi(2)).sqrt();
    let r2 = (-os + recall - one) / T::of(2.0).sqrt();
    let r = one - (r1.abs() + r2.abs()) / T::of(2.0);
    Some((os, r))
}

/// Corpus scores, percentages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub os: Option<f64>,
    pub r_value: Option<f64>,
    pub n_ref: usize,
    pub n_hyp: usize,
    pub n_hit: usize,
    pub tolerance_ms: f64,
}

impl EvalReport {
    /// Scores from pooled counts.
    pub fn from_counts(n_hit: usize, n_ref: usize, n_hyp: usize, tolerance_ms: f64) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let p = ratio(n_hit, n_hyp);
        let r = ratio(n_hit, n_ref);
        let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        let (os, r_value) = match os_and_r_value(p, r) {
            Some((os, rv)) => (Some(100.0 * os), Some(100.0 * rv)),
            None => (None, None),
        };
        Self {
            precision: 100.0 * p,
            recall: 100.0 * r,
            f1: 100.0 * f1,
            os,
            r_value,
            n_ref,
            n_hyp,
            n_hit,
            tolerance_ms,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned human-readable table.
    pub fn to_table(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "n/a".to_owned(), |x| format!("{x:.2}"));
        let rows = [
            ("precision", format!("{:.2}", self.precision)),
            ("recall", format!("{:.2}", self.recall)),
            ("f1", format!("{:.2}", self.f1)),
            ("os", opt(self.os)),
            ("r_value", opt(self.r_value)),
            ("n_ref", self.n_ref.to_string()),
            ("n_hyp", self.n_hyp.to_string()),
            ("n_hit", self.n_hit.to_string()),
            ("tolerance_ms", format!("{}", self.tolerance_ms)),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<14}{v:>12}");
        }
        out
    }
}

/// Micro-averaged report over paired utterances. Both corpora must cover the
/// same utterance ids; order does not matter.
pub fn compute_report(
    reference: &[BoundarySet],
    hypothesis: &[BoundarySet],
    tolerance_ms: f64,
    frame_period_ms: f64,
) -> Result<EvalReport> {
    if !(tolerance_ms >= 0.0) {
        return Err(Error::argument("tolerance must be non-negative"));
    }
    let hyp_by_id: HashMap<&str, &BoundarySet> =
        hypothesis.iter().map(|b| (b.utterance_id(), b)).collect();
    if hyp_by_id.len() != hypothesis.len() || hypothesis.len() != reference.len() {
        return Err(Error::argument(
            "reference and hypothesis must cover the same utterances exactly once",
        ));
    }
    let (mut n_hit, mut n_ref, mut n_hyp) = (0, 0, 0);
    for r in reference {
        let h = hyp_by_id.get(r.utterance_id()).ok_or_else(|| {
            Error::argument(format!("no hypothesis for utterance {:?}", r.utterance_id()))
        })?;
        n_hit += match_boundaries(r, h, tolerance_ms, frame_period_ms);
        n_ref += r.len();
        n_hyp += h.len();
    }
    Ok(EvalReport::from_counts(n_hit, n_ref, n_hyp, tolerance_ms))
}
