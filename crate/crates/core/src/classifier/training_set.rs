use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gradient::{gradient_magnitude, percentile_threshold, pseudo_labels, Threshold};
use crate::io::{BoundarySet, DatasetManifest, FrameSequence};
use crate::scalar::Scalar;

/// Where training labels come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LabelSource {
    /// Thresholded gradient magnitudes at the given percentile of the pooled training frames.
    Pseudo { percentile: f64 },
    /// Frames hit by a ground-truth boundary are labeled 1.
    GroundTruth,
}

/// Frames stacked from the selected utterances, M×D, with {0,1} labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet<T> {
    pub features: Vec<T>,
    pub labels: Vec<u8>,
    pub dim: usize,
    pub utterance_ids: Vec<String>,
    /// Set for pseudo-labeled sets.
    pub threshold: Option<Threshold<T>>,
}

impl<T: Scalar> TrainingSet<T> {
    pub fn new(features: Vec<T>, labels: Vec<u8>, dim: usize) -> Result<Self> {
        if dim == 0 || features.len() != labels.len() * dim {
            return Err(Error::data(format!(
                "{} feature values do not match {} labels of dimension {dim}",
                features.len(),
                labels.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::data("training set has no rows"));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(Error::data("labels must be 0 or 1"));
        }
        Ok(Self {
            features,
            labels,
            dim,
            utterance_ids: Vec::new(),
            threshold: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, T> {
        self.features.chunks_exact(self.dim)
    }

    /// Fraction of rows labeled 1.
    pub fn positive_fraction(&self) -> f64 {
        self.labels.iter().filter(|&&l| l == 1).count() as f64 / self.len() as f64
    }

    /// Same rows with every label flipped.
    pub fn flipped(&self) -> Self {
        let mut out = self.clone();
        for l in &mut out.labels {
            *l = 1 - *l;
        }
        out
    }

    fn stack(seqs: &[FrameSequence<T>], labels: Vec<Vec<u8>>) -> Result<Self> {
        let dim = seqs
            .first()
            .map(FrameSequence::dim)
            .ok_or_else(|| Error::argument("no training utterances"))?;
        let mut features = Vec::with_capacity(seqs.iter().map(|s| s.as_slice().len()).sum());
        for s in seqs {
            if s.dim() != dim {
                return Err(Error::data(format!(
                    "{} has dimension {}, expected {dim}",
                    s.utterance_id(),
                    s.dim()
                )));
            }
            features.extend_from_slice(s.as_slice());
        }
        let mut ts = Self::new(features, labels.concat(), dim)?;
        ts.utterance_ids = seqs.iter().map(|s| s.utterance_id().to_owned()).collect();
        Ok(ts)
    }

    /// Pseudo-label the sequences with a threshold pooled over all of them.
    pub fn pseudo_labeled(seqs: &[FrameSequence<T>], percentile: f64) -> Result<Self> {
        let mags: Vec<_> = seqs.iter().map(gradient_magnitude).collect();
        let pooled: Vec<T> = mags.iter().flat_map(|m| m.magnitudes.iter().copied()).collect();
        let thr = percentile_threshold(&pooled, percentile)?;
        let labels = mags.iter().map(|m| pseudo_labels(m, &thr).labels).collect();
        let mut ts = Self::stack(seqs, labels)?;
        ts.threshold = Some(thr);
        Ok(ts)
    }

    /// Label frame `t` as 1 iff some ground-truth boundary falls on it.
    pub fn ground_truth_labeled(seqs: &[FrameSequence<T>], truth: &[BoundarySet]) -> Result<Self> {
        if seqs.len() != truth.len() {
            return Err(Error::argument("one boundary set per sequence required"));
        }
        let labels = seqs
            .iter()
            .zip(truth)
            .map(|(s, b)| {
                let mut l = vec![0u8; s.num_frames()];
                for &f in b.frames() {
                    if f < l.len() {
                        l[f] = 1;
                    }
                }
                l
            })
            .collect();
        Self::stack(seqs, labels)
    }
}

/// Uniformly sample `num_utterances` entries without replacement, returned
/// in manifest order.
pub fn sample_indices(len: usize, num_utterances: usize, seed: u64) -> Result<Vec<usize>> {
    if num_utterances == 0 || num_utterances > len {
        return Err(Error::argument(format!(
            "cannot sample {num_utterances} training utterances from a manifest of {len}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, len, num_utterances).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

/// Load a seeded subset of the manifest and label it.
pub fn assemble_training_set<T: Scalar>(
    manifest: &DatasetManifest,
    num_utterances: usize,
    seed: u64,
    label_source: LabelSource,
) -> Result<TrainingSet<T>> {
    if manifest.is_empty() {
        return Err(Error::argument("empty manifest"));
    }
    let picked = sample_indices(manifest.len(), num_utterances, seed)?;
    let entries: Vec<_> = picked.iter().map(|&i| &manifest.entries()[i]).collect();
    let seqs = entries
        .iter()
        .map(|e| manifest.load_features(e).map(|s| s.cast::<T>()))
        .collect::<Result<Vec<_>>>()?;
    match label_source {
        LabelSource::Pseudo { percentile } => TrainingSet::pseudo_labeled(&seqs, percentile),
        LabelSource::GroundTruth => {
            let truth = entries
                .iter()
                .zip(&seqs)
                .map(|(e, s)| manifest.ground_truth(e, f64::from(s.frame_period_ms())))
                .collect::<Result<Vec<_>>>()?;
            TrainingSet::ground_truth_labeled(&seqs, &truth)
        }
    }
}
