mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use segkit::io::{read_boundary_file, write_boundary_file, DatasetManifest};
use segkit::pipeline::{self, SweepAxis};
use segkit::synth::{self, SynthConfig};
use segkit::{Error, Model, Result};

use args::{AxisArg, Cli, Command, SynthArgs};

/// Exit codes: 2 usage/argument, 3 format, 4 data, 5 I/O.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Argument(_) => 2,
        Error::Format(_) | Error::Length(_) => 3,
        Error::Data(_) => 4,
        Error::Io { .. } => 5,
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.into(), source: e })?;
    }
    fs::write(path, text).map_err(|e| Error::Io { path: path.into(), source: e })
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn synth_config(a: &SynthArgs) -> Result<SynthConfig> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Io { path: p.clone(), source: e })?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Format(format!("{}: {e}", p.display())))?
        }
        None => SynthConfig::default(),
    };
    macro_rules! set {
        ($($flag:ident => $($field:ident).+),* $(,)?) => {
            $(if let Some(v) = a.$flag { cfg.$($field).+ = v; })*
        };
    }
    set!(
        seed => seed,
        num_utterances => num_utterances,
        dim => dim,
        frame_period_ms => frame_period_ms,
        word_len_min => word_len_frames.min,
        word_len_max => word_len_frames.max,
        words_min => words_per_utterance.min,
        words_max => words_per_utterance.max,
        vocab_size => vocab_size,
        centroid_scale => centroid_scale,
        boundary_strength => boundary_strength,
        consistency => boundary_direction_consistency,
        spike_rate => within_word_spike_rate,
        spike_strength => within_word_spike_strength,
        noise_sigma => noise_sigma,
    );
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth(a) => {
            let cfg = synth_config(&a)?;
            let corpus = synth::generate(&cfg)?;
            let manifest = corpus.write(&a.out)?;
            write_text(&a.out.join("synth_config.json"), &to_json(&cfg))?;
            println!("wrote {} utterances to {}", corpus.sequences.len(), manifest.display());
        }
        Command::Train(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let (model, report) = pipeline::train(&manifest, &a.train.config())?;
            model.save(&a.out)?;
            let text = to_json(&report);
            if let Some(p) = &a.report {
                write_text(p, &text)?;
            }
            print!("{text}");
        }
        Command::Segment(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let model = Model::load(&a.model)?;
            let records = pipeline::segment(&manifest, &model, &a.nms.config(), a.jobs.jobs)?;
            write_boundary_file(&a.out, &records)?;
            println!("wrote boundaries for {} utterances to {}", records.len(), a.out.display());
        }
        Command::Eval(a) => {
            let reference = match (&a.reference, &a.manifest) {
                (Some(r), _) => read_boundary_file(r)?,
                (None, Some(m)) => pipeline::reference_boundaries(&DatasetManifest::load(m)?)?,
                (None, None) => return Err(Error::Argument("--reference or --manifest required".into())),
            };
            let hyp = read_boundary_file(&a.hypothesis)?;
            let report = pipeline::evaluate(&reference, &hyp, a.frame_tolerance_ms)?;
            if let Some(p) = &a.out {
                write_text(p, &report.to_json())?;
            }
            print!("{}", report.to_table());
        }
        Command::BaselineGrad(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let records = pipeline::baseline_grad(&manifest, &a.nms.config(), a.jobs.jobs)?;
            write_boundary_file(&a.out, &records)?;
            println!("wrote boundaries for {} utterances to {}", records.len(), a.out.display());
        }
        Command::Supervised(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            if !manifest.has_ground_truth() {
                return Err(Error::Data("supervised training needs ground truth on every entry".into()));
            }
            let (model, train_report) = pipeline::train_supervised(&manifest, &a.train.config())?;
            let hyp = pipeline::segment(&manifest, &model, &a.nms.config(), a.jobs.jobs)?;
            let reference = pipeline::reference_boundaries(&manifest)?;
            let report = pipeline::evaluate(&reference, &hyp, a.frame_tolerance_ms)?;
            fs::create_dir_all(&a.out).map_err(|e| Error::Io { path: a.out.clone(), source: e })?;
            model.save(a.out.join("model.json"))?;
            write_boundary_file(a.out.join("boundaries.jsonl"), &hyp)?;
            write_text(&a.out.join("train_report.json"), &to_json(&train_report))?;
            write_text(&a.out.join("report.json"), &report.to_json())?;
            print!("{}", report.to_table());
        }
        Command::Sweep(a) => {
            let manifest = DatasetManifest::load(&a.manifest)?;
            let (axis, defaults): (SweepAxis, &[f64]) = match a.axis {
                AxisArg::Percentile => (
                    SweepAxis::Percentile,
                    &[10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0],
                ),
                AxisArg::NumTrain => (SweepAxis::NumTrain, &[1.0, 5.0, 10.0, 25.0, 50.0, 100.0]),
            };
            let values = if a.values.is_empty() { defaults.to_vec() } else { a.values.clone() };
            let rows = pipeline::sweep(
                &manifest,
                &a.train.config(),
                axis,
                &values,
                &a.nms.config(),
                a.frame_tolerance_ms,
                a.jobs.jobs,
            )?;
            write_text(&a.out, &to_json(&rows))?;
            let tsv = pipeline::sweep_tsv(&rows);
            write_text(&a.out.with_extension("tsv"), &tsv)?;
            print!("{tsv}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("segkit: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
