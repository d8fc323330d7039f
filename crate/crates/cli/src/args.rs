use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use segkit::classifier::{LogisticOptions, Objective};
use segkit::nms::NmsConfig;
use segkit::pipeline::{SegmentConfig, TrainConfig};

#[derive(Debug, Parser)]
#[command(name = "segkit", version, about = "Unsupervised word segmentation of speech frame embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic corpus (features, manifest, reference boundaries).
    Synth(SynthArgs),
    /// Train a frame classifier on gradient pseudo-labels.
    Train(TrainArgs),
    /// Score utterances with a model and write predicted boundaries.
    Segment(SegmentArgs),
    /// Compare predicted boundaries against a reference.
    Eval(EvalArgs),
    /// Peak-pick raw gradient magnitudes without a classifier.
    BaselineGrad(BaselineArgs),
    /// Train on ground-truth boundary frames, then segment and evaluate.
    Supervised(SupervisedArgs),
    /// Retrain/segment/evaluate over a range of percentiles or training sizes.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObjectiveArg {
    Ridge,
    Logistic,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Ridge => Objective::Ridge,
            ObjectiveArg::Logistic => Objective::Logistic,
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainFlags {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of training utterances sampled from the manifest.
    #[arg(long, default_value_t = 100)]
    pub num_train: usize,
    /// Magnitudes at or below this percentile of the pooled training frames get label 0.
    #[arg(long, default_value_t = 20.0)]
    pub theta_percentile: f64,
    #[arg(long, default_value_t = 1e7)]
    pub ridge_lambda: f64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Ridge)]
    pub objective: ObjectiveArg,
    /// Logistic solver iteration cap.
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// Logistic solver gradient-norm tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

impl TrainFlags {
    pub fn config(&self) -> TrainConfig {
        TrainConfig {
            num_train: self.num_train,
            seed: self.seed,
            percentile: self.theta_percentile,
            lambda: self.ridge_lambda,
            objective: self.objective.into(),
            logistic: LogisticOptions {
                max_iters: self.max_iters,
                tol: self.tol,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct NmsFlags {
    #[arg(long, default_value_t = 300.0)]
    pub tau_avg_ms: f64,
    #[arg(long, default_value_t = 60.0)]
    pub tau_min_ms: f64,
    /// Fixed number of boundaries per utterance (overrides --tau-avg-ms).
    #[arg(long)]
    pub num_words: Option<usize>,
    /// Use each utterance's ground-truth boundary count as its budget (diagnostic).
    #[arg(long, conflicts_with = "num_words")]
    pub num_words_from_reference: bool,
}

impl NmsFlags {
    pub fn config(&self) -> SegmentConfig {
        SegmentConfig {
            nms: NmsConfig {
                tau_avg_ms: self.tau_avg_ms,
                tau_min_ms: self.tau_min_ms,
                fixed_word_count: self.num_words,
            },
            budget_from_reference: self.num_words_from_reference,
        }
    }
}

#[derive(Debug, Args)]
pub struct JobsFlag {
    /// Worker threads; output does not depend on it.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// JSON config file; flags given explicitly override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub num_utterances: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub frame_period_ms: Option<f32>,
    #[arg(long)]
    pub word_len_min: Option<usize>,
    #[arg(long)]
    pub word_len_max: Option<usize>,
    #[arg(long)]
    pub words_min: Option<usize>,
    #[arg(long)]
    pub words_max: Option<usize>,
    #[arg(long)]
    pub vocab_size: Option<usize>,
    #[arg(long)]
    pub centroid_scale: Option<f64>,
    #[arg(long)]
    pub boundary_strength: Option<f64>,
    #[arg(long)]
    pub consistency: Option<f64>,
    #[arg(long)]
    pub spike_rate: Option<f64>,
    #[arg(long)]
    pub spike_strength: Option<f64>,
    #[arg(long)]
    pub noise_sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Training report file (defaults to stdout only).
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub train: TrainFlags,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Boundary file to write.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub nms: NmsFlags,
    #[command(flatten)]
    pub jobs: JobsFlag,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Reference boundary file.
    #[arg(long, required_unless_present = "manifest")]
    pub reference: Option<PathBuf>,
    /// Take reference boundaries from a manifest's ground truth instead.
    #[arg(long, conflicts_with = "reference")]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub hypothesis: PathBuf,
    #[arg(long, default_value_t = 20.0)]
    pub frame_tolerance_ms: f64,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub nms: NmsFlags,
    #[command(flatten)]
    pub jobs: JobsFlag,
}

#[derive(Debug, Args)]
pub struct SupervisedArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory for model.json, boundaries.jsonl and report.json.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub train: TrainFlags,
    #[command(flatten)]
    pub nms: NmsFlags,
    #[arg(long, default_value_t = 20.0)]
    pub frame_tolerance_ms: f64,
    #[command(flatten)]
    pub jobs: JobsFlag,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    Percentile,
    NumTrain,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// JSON table path; a `.tsv` with the same stem is written alongside.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = AxisArg::Percentile)]
    pub axis: AxisArg,
    /// Comma-separated settings; defaults to 10,20,...,90 for percentile
    /// and 1,5,10,25,50,100 for num-train.
    #[arg(long, value_delimiter = ',')]
    pub values: Vec<f64>,
    #[command(flatten)]
    pub train: TrainFlags,
    #[command(flatten)]
    pub nms: NmsFlags,
    #[arg(long, default_value_t = 20.0)]
    pub frame_tolerance_ms: f64,
    #[command(flatten)]
    pub jobs: JobsFlag,
}
