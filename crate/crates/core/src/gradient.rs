//! Temporal gradient magnitudes and the pseudo-labels thresholded from them.

use crate::error::{Error, Result};
use crate::io::FrameSequence;
use crate::scalar::Scalar;

/// Squared norm of the temporal gradient at every frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMagnitudes<T> {
    pub utterance_id: String,
    pub magnitudes: Vec<T>,
}

/// Binary per-frame labels; 1 marks a magnitude above the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoLabels {
    pub utterance_id: String,
    pub labels: Vec<u8>,
}

impl PseudoLabels {
    pub fn count_ones(&self) -> usize {
        self.labels.iter().filter(|&&l| l == 1).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<T> {
    pub theta: T,
    pub percentile: f64,
}

/// Central differences `(f[t+1] - f[t-1]) / 2` in the interior, one-sided
/// unhalved differences at the two edges. A single frame has magnitude 0.
pub fn gradient_magnitude<T: Scalar>(seq: &FrameSequence<T>) -> GradientMagnitudes<T> {
    let n = seq.num_frames();
    let half = T::of(0.5);
    let sq_dist = |a: &[T], b: &[T], scale: T| {
        a.iter()
            .zip(b)
            .fold(T::zero(), |acc, (&x, &y)| {
                let d = (x - y) * scale;
                acc + d * d
            })
    };
    let magnitudes = (0..n)
        .map(|t| {
            if n == 1 {
                T::zero()
            } else if t == 0 {
                sq_dist(seq.frame(1), seq.frame(0), T::one())
            } else if t == n - 1 {
                sq_dist(seq.frame(n - 1), seq.frame(n - 2), T::one())
            } else {
                sq_dist(seq.frame(t + 1), seq.frame(t - 1), half)
            }
        })
        .collect();
    GradientMagnitudes {
        utterance_id: seq.utterance_id().to_owned(),
        magnitudes,
    }
}

/// Resolve a percentile in (0, 100) to a 1-based nearest rank over `n` values.
fn nearest_rank(percentile: f64, n: usize) -> usize {
    let x = percentile * n as f64 / 100.0;
    // p*n/100 is exact for integral p; snap near-integers so that e.g. 30% of
    // 10 is rank 3 and not 4.
    let r = if (x - x.round()).abs() < 1e-9 {
        x.round()
    } else {
        x.ceil()
    };
    (r as usize).clamp(1, n)
}

/// Nearest-rank percentile of the pooled values (no interpolation).
pub fn percentile_threshold<T: Scalar>(values: &[T], percentile: f64) -> Result<Threshold<T>> {
    if values.is_empty() {
        return Err(Error::argument("percentile of an empty magnitude pool"));
    }
    if !(percentile > 0.0 && percentile < 100.0) {
        return Err(Error::argument(format!(
            "percentile must lie in (0, 100), got {percentile}"
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::argument("magnitude pool contains non-finite values"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let rank = nearest_rank(percentile, sorted.len());
    Ok(Threshold {
        theta: sorted[rank - 1],
        percentile,
    })
}

pub fn pseudo_labels<T: Scalar>(mags: &GradientMagnitudes<T>, thr: &Threshold<T>) -> PseudoLabels {
    PseudoLabels {
        utterance_id: mags.utterance_id.clone(),
        labels: mags
            .magnitudes
            .iter()
            .map(|&m| u8::from(m > thr.theta))
            .collect(),
    }
}
