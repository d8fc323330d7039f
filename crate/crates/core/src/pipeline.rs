//! End-to-end flows shared by the command line and the acceptance tests:
//! train, segment, baseline, supervised probe, evaluation and sweeps.

use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{
    assemble_training_set, score, train_logistic, train_ridge, LabelSource, LogisticOptions,
    Objective,
};
use crate::error::{Error, Result};
use crate::gradient::gradient_magnitude;
use crate::io::{read_header, BoundaryRecord, BoundarySet, DatasetManifest, ManifestEntry};
use crate::metrics::{compute_report, EvalReport};
use crate::nms::{detect_peaks, NmsConfig};
use crate::{Model, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub num_train: usize,
    pub seed: u64,
    pub percentile: f64,
    pub lambda: f64,
    pub objective: Objective,
    pub logistic: LogisticOptions,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            num_train: 100,
            seed: 0,
            percentile: 20.0,
            lambda: 1e7,
            objective: Objective::Ridge,
            logistic: LogisticOptions::default(),
        }
    }
}

/// How many boundaries NMS may place per utterance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentConfig {
    pub nms: NmsConfig,
    /// Budget each utterance with its ground-truth boundary count instead.
    /// Diagnostic only: reads reference boundaries.
    pub budget_from_reference: bool,
}

impl From<NmsConfig> for SegmentConfig {
    fn from(nms: NmsConfig) -> Self {
        Self {
            nms,
            budget_from_reference: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport {
    pub objective: Objective,
    pub lambda: f64,
    pub label_source: &'static str,
    pub percentile: Option<f64>,
    pub theta: Option<f64>,
    pub positive_fraction: f64,
    pub num_utterances: usize,
    pub num_frames: usize,
    pub feature_dim: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Fit the configured objective to a training set.
pub fn fit(ts: &TrainingSet, cfg: &TrainConfig) -> Result<Model> {
    match cfg.objective {
        Objective::Ridge => train_ridge(ts, cfg.lambda),
        Objective::Logistic => train_logistic(ts, cfg.lambda, cfg.logistic),
    }
}

fn train_with(
    manifest: &DatasetManifest,
    cfg: &TrainConfig,
    source: LabelSource,
) -> Result<(Model, TrainReport)> {
    let ts: TrainingSet = assemble_training_set(manifest, cfg.num_train, cfg.seed, source)?;
    let model = fit(&ts, cfg)?;
    let report = TrainReport {
        objective: cfg.objective,
        lambda: cfg.lambda,
        label_source: match source {
            LabelSource::Pseudo { .. } => "pseudo",
            LabelSource::GroundTruth => "ground_truth",
        },
        percentile: ts.threshold.map(|t| t.percentile),
        theta: ts.threshold.map(|t| t.theta),
        positive_fraction: ts.positive_fraction(),
        num_utterances: ts.utterance_ids.len(),
        num_frames: ts.len(),
        feature_dim: ts.dim,
        iterations: model.fit.iterations,
        converged: model.fit.converged,
    };
    Ok((model, report))
}

/// Pseudo-labeled training. Never touches ground-truth boundaries.
pub fn train(manifest: &DatasetManifest, cfg: &TrainConfig) -> Result<(Model, TrainReport)> {
    train_with(
        manifest,
        cfg,
        LabelSource::Pseudo {
            percentile: cfg.percentile,
        },
    )
}

/// Supervised probe trained on ground-truth boundary frames.
pub fn train_supervised(
    manifest: &DatasetManifest,
    cfg: &TrainConfig,
) -> Result<(Model, TrainReport)> {
    train_with(manifest, cfg, LabelSource::GroundTruth)
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::argument(format!("cannot start {jobs} workers: {e}")))
}

/// Run `per_utterance` over the manifest on `jobs` workers, keeping manifest order.
fn map_entries<F>(manifest: &DatasetManifest, jobs: usize, per_utterance: F) -> Result<Vec<BoundaryRecord>>
where
    F: Fn(&ManifestEntry) -> Result<BoundaryRecord> + Sync + Send,
{
    thread_pool(jobs)?.install(|| {
        manifest
            .entries()
            .par_iter()
            .map(per_utterance)
            .collect::<Result<Vec<_>>>()
    })
}

fn nms_for(manifest: &DatasetManifest, entry: &ManifestEntry, period: f64, cfg: &SegmentConfig) -> Result<NmsConfig> {
    if !cfg.budget_from_reference {
        return Ok(cfg.nms);
    }
    let k = manifest.ground_truth(entry, period)?.len();
    Ok(NmsConfig {
        fixed_word_count: Some(k.max(1)),
        ..cfg.nms
    })
}

/// Score every utterance with `model` and pick boundaries.
pub fn segment(
    manifest: &DatasetManifest,
    model: &Model,
    cfg: &SegmentConfig,
    jobs: usize,
) -> Result<Vec<BoundaryRecord>> {
    cfg.nms.validate()?;
    map_entries(manifest, jobs, |entry| {
        let seq = manifest.load_features(entry)?.cast::<f64>();
        let period = f64::from(seq.frame_period_ms());
        let scores = score(model, &seq)?;
        let nms = nms_for(manifest, entry, period, cfg)?;
        Ok(BoundaryRecord {
            boundaries: detect_peaks(&entry.utterance_id, &scores, period, &nms)?,
            frame_period_ms: period,
        })
    })
}

/// Peak-pick raw gradient magnitudes, no classifier.
pub fn baseline_grad(
    manifest: &DatasetManifest,
    cfg: &SegmentConfig,
    jobs: usize,
) -> Result<Vec<BoundaryRecord>> {
    cfg.nms.validate()?;
    map_entries(manifest, jobs, |entry| {
        let seq = manifest.load_features(entry)?.cast::<f64>();
        let period = f64::from(seq.frame_period_ms());
        let mags = gradient_magnitude(&seq);
        let nms = nms_for(manifest, entry, period, cfg)?;
        Ok(BoundaryRecord {
            boundaries: detect_peaks(&entry.utterance_id, &mags.magnitudes, period, &nms)?,
            frame_period_ms: period,
        })
    })
}

/// Ground-truth boundaries of every manifest entry.
pub fn reference_boundaries(manifest: &DatasetManifest) -> Result<Vec<BoundaryRecord>> {
    manifest
        .entries()
        .iter()
        .map(|e| {
            let period = f64::from(read_header(manifest.feature_path(e))?.frame_period_ms);
            Ok(BoundaryRecord {
                boundaries: manifest.ground_truth(e, period)?,
                frame_period_ms: period,
            })
        })
        .collect()
}

/// Score hypothesis records against reference records.
pub fn evaluate(
    reference: &[BoundaryRecord],
    hypothesis: &[BoundaryRecord],
    tolerance_ms: f64,
) -> Result<EvalReport> {
    let period = reference
        .first()
        .or(hypothesis.first())
        .map_or(20.0, |r| r.frame_period_ms);
    if reference
        .iter()
        .chain(hypothesis)
        .any(|r| r.frame_period_ms != period)
    {
        return Err(Error::argument("all boundary records must share one frame period"));
    }
    let sets = |rs: &[BoundaryRecord]| -> Vec<BoundarySet> {
        rs.iter().map(|r| r.boundaries.clone()).collect()
    };
    compute_report(&sets(reference), &sets(hypothesis), tolerance_ms, period)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameter: &'static str,
    pub value: f64,
    pub theta: Option<f64>,
    pub report: EvalReport,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepAxis {
    Percentile,
    NumTrain,
}

/// Retrain, resegment and re-evaluate for each setting on one axis.
pub fn sweep(
    manifest: &DatasetManifest,
    base: &TrainConfig,
    axis: SweepAxis,
    values: &[f64],
    seg: &SegmentConfig,
    tolerance_ms: f64,
    jobs: usize,
) -> Result<Vec<SweepRow>> {
    let reference = reference_boundaries(manifest)?;
    let blind = manifest.without_ground_truth();
    values
        .iter()
        .map(|&v| {
            let mut cfg = *base;
            let parameter = match axis {
                SweepAxis::Percentile => {
                    cfg.percentile = v;
                    "percentile"
                }
                SweepAxis::NumTrain => {
                    if v < 1.0 || v.fract() != 0.0 {
                        return Err(Error::argument(format!("num_train must be a positive integer, got {v}")));
                    }
                    cfg.num_train = v as usize;
                    "num_train"
                }
            };
            let (model, rep) = train(&blind, &cfg)?;
            let hyp = if seg.budget_from_reference {
                segment(manifest, &model, seg, jobs)?
            } else {
                segment(&blind, &model, seg, jobs)?
            };
            Ok(SweepRow {
                parameter,
                value: v,
                theta: rep.theta,
                report: evaluate(&reference, &hyp, tolerance_ms)?,
            })
        })
        .collect()
}

/// Tab-separated plot data for sweep rows.
pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "nan".to_owned(), |x| format!("{x}"));
    let mut out = String::from("parameter\tvalue\ttheta\tprecision\trecall\tf1\tos\tr_value\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.parameter,
            r.value,
            opt(r.theta),
            r.report.precision,
            r.report.recall,
            r.report.f1,
            opt(r.report.os),
            opt(r.report.r_value),
        ));
    }
    out
}
