//! Synthetic labeled embedding corpora.
//!
//! Every word is a vocabulary centroid held for a run of frames. The first
//! frame of each word (the boundary frame) is pushed along a mostly fixed
//! direction, and some words carry a spike in a random direction on one
//! interior frame. Raw gradient magnitude responds to both; only the boundary
//! push is linearly decodable from a single frame.
//!
//! With the default `centroid_scale` word identity sits near the noise floor,
//! so the central-difference magnitude of the boundary frame itself is
//! moderate while its two neighbours peak. Low magnitudes stay reliable
//! "inside a word" evidence; high ones do not pin the boundary frame.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{
    frame_to_time, write_boundary_file, write_features, BoundaryRecord, BoundarySet,
    DatasetManifest, FrameSequence, ManifestEntry,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: usize,
    pub max: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub num_utterances: usize,
    pub dim: usize,
    pub frame_period_ms: f32,
    pub word_len_frames: Range,
    pub words_per_utterance: Range,
    pub vocab_size: usize,
    /// Per-coordinate standard deviation of the vocabulary centroids.
    pub centroid_scale: f64,
    pub boundary_strength: f64,
    pub boundary_direction_consistency: f64,
    pub within_word_spike_rate: f64,
    pub within_word_spike_strength: f64,
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            num_utterances: 200,
            dim: 64,
            frame_period_ms: 20.0,
            word_len_frames: Range { min: 5, max: 25 },
            words_per_utterance: Range { min: 6, max: 12 },
            vocab_size: 50,
            centroid_scale: 0.015,
            boundary_strength: 1.0,
            boundary_direction_consistency: 1.0,
            within_word_spike_rate: 0.0,
            within_word_spike_strength: 0.0,
            noise_sigma: 0.05,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::argument(m.to_owned()));
        if self.num_utterances == 0 || self.dim == 0 || self.vocab_size == 0 {
            return bad("num_utterances, dim and vocab_size must be at least 1");
        }
        if self.word_len_frames.min == 0 || self.word_len_frames.min > self.word_len_frames.max {
            return bad("word length range must satisfy 1 <= min <= max");
        }
        if self.words_per_utterance.min == 0
            || self.words_per_utterance.min > self.words_per_utterance.max
        {
            return bad("words per utterance range must satisfy 1 <= min <= max");
        }
        if !(self.frame_period_ms > 0.0 && self.frame_period_ms.is_finite()) {
            return bad("frame_period_ms must be positive");
        }
        let nonneg = [
            self.centroid_scale,
            self.boundary_strength,
            self.within_word_spike_strength,
            self.noise_sigma,
        ];
        if nonneg.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return bad("strengths and noise_sigma must be finite and non-negative");
        }
        let unit = [self.boundary_direction_consistency, self.within_word_spike_rate];
        if unit.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return bad("consistency and spike rate must lie in [0, 1]");
        }
        Ok(())
    }
}

/// A generated corpus held in memory.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub sequences: Vec<FrameSequence<f32>>,
    pub truth: Vec<BoundarySet>,
    pub words: Vec<Vec<usize>>,
    pub frame_period_ms: f32,
}

fn gaussian_vec(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        })
        .collect()
}

fn unit_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v = gaussian_vec(rng, dim, 1.0);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Generate a corpus. Utterance `i` draws from its own ChaCha stream `i + 1`;
/// stream 0 holds the vocabulary and the shared boundary direction.
pub fn generate(cfg: &SynthConfig) -> Result<SynthCorpus> {
    cfg.validate()?;
    let dim = cfg.dim;
    let mut global = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vocab: Vec<Vec<f64>> = (0..cfg.vocab_size)
        .map(|_| gaussian_vec(&mut global, dim, cfg.centroid_scale))
        .collect();
    let direction = unit_vec(&mut global, dim);

    let utterances: Vec<_> = (0..cfg.num_utterances)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64 + 1);
            utterance(cfg, &vocab, &direction, i, &mut rng)
        })
        .collect();

    let mut corpus = SynthCorpus {
        sequences: Vec::with_capacity(cfg.num_utterances),
        truth: Vec::with_capacity(cfg.num_utterances),
        words: Vec::with_capacity(cfg.num_utterances),
        frame_period_ms: cfg.frame_period_ms,
    };
    for u in utterances {
        let (seq, truth, words) = u?;
        corpus.sequences.push(seq);
        corpus.truth.push(truth);
        corpus.words.push(words);
    }
    Ok(corpus)
}

type Utterance = (FrameSequence<f32>, BoundarySet, Vec<usize>);

fn utterance(
    cfg: &SynthConfig,
    vocab: &[Vec<f64>],
    direction: &[f64],
    index: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Utterance> {
    let dim = cfg.dim;
    let n_words = rng.random_range(cfg.words_per_utterance.min..=cfg.words_per_utterance.max);
    let words: Vec<usize> = (0..n_words).map(|_| rng.random_range(0..vocab.len())).collect();
    let lens: Vec<usize> = (0..n_words)
        .map(|_| rng.random_range(cfg.word_len_frames.min..=cfg.word_len_frames.max))
        .collect();
    let total: usize = lens.iter().sum();
    let mut data = vec![0.0f64; total * dim];
    let mut boundaries = Vec::with_capacity(n_words - 1);
    let c = cfg.boundary_direction_consistency;

    let mut start = 0;
    for (w, (&word, &len)) in words.iter().zip(&lens).enumerate() {
        for t in start..start + len {
            let row = &mut data[t * dim..(t + 1) * dim];
            row.copy_from_slice(&vocab[word]);
        }
        if w > 0 {
            boundaries.push(start);
            let fresh = unit_vec(rng, dim);
            let row = &mut data[start * dim..(start + 1) * dim];
            axpy(row, cfg.boundary_strength * c, direction);
            axpy(row, cfg.boundary_strength * (1.0 - c), &fresh);
        }
        if len >= 3 && rng.random_bool(cfg.within_word_spike_rate) {
            // Keep the spike off the frames adjacent to either word edge when possible.
            let (lo, hi) = if len >= 5 { (2, len - 3) } else { (1, len - 2) };
            let t = start + rng.random_range(lo..=hi);
            let spike = unit_vec(rng, dim);
            axpy(&mut data[t * dim..(t + 1) * dim], cfg.within_word_spike_strength, &spike);
        }
        start += len;
    }
    if cfg.noise_sigma > 0.0 {
        for v in &mut data {
            let z: f64 = StandardNormal.sample(rng);
            *v += cfg.noise_sigma * z;
        }
    }

    let id = format!("synth-{index:05}");
    let seq = FrameSequence::new(
        id.clone(),
        data.into_iter().map(|v| v as f32).collect(),
        dim,
        cfg.frame_period_ms,
    )?;
    let truth = BoundarySet::new(id, boundaries, total)?;
    Ok((seq, truth, words))
}

impl SynthCorpus {
    /// Write `features/<id>.gsf`, `manifest.jsonl` (with ground truth in ms) and
    /// `reference.jsonl` (boundary file) under `dir`. Returns the manifest path.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        let feat_dir = dir.join("features");
        fs::create_dir_all(&feat_dir).map_err(|e| Error::io(&feat_dir, e))?;
        let period = f64::from(self.frame_period_ms);
        let mut entries = Vec::with_capacity(self.sequences.len());
        let mut records = Vec::with_capacity(self.sequences.len());
        for (seq, truth) in self.sequences.iter().zip(&self.truth) {
            let rel = PathBuf::from("features").join(format!("{}.gsf", seq.utterance_id()));
            write_features(seq, dir.join(&rel))?;
            entries.push(ManifestEntry {
                utterance_id: seq.utterance_id().to_owned(),
                features: rel,
                num_frames: seq.num_frames(),
                boundaries_ms: Some(truth.frames().iter().map(|&f| frame_to_time(f, period)).collect()),
            });
            records.push(BoundaryRecord {
                boundaries: truth.clone(),
                frame_period_ms: period,
            });
        }
        let manifest = DatasetManifest::new(entries, dir)?;
        let path = dir.join("manifest.jsonl");
        manifest.save(&path)?;
        write_boundary_file(dir.join("reference.jsonl"), &records)?;
        Ok(path)
    }
}
