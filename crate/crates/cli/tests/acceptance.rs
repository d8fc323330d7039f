//! Acceptance suite. Runs every criterion in order, prints one
//! `[PASS]`/`[FAIL]` line each, and exits non-zero if any failed.
//! All tolerances are pinned below.

use std::cell::OnceCell;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use segkit::classifier::{
    assemble_training_set, score, train_logistic, train_ridge, LabelSource, LogisticOptions,
    TrainingSet,
};
use segkit::gradient::gradient_magnitude;
use segkit::io::{DatasetManifest, FrameSequence};
use segkit::metrics::os_and_r_value;
use segkit::nms::{detect_peaks, NmsConfig};
use segkit::pipeline::{self, SegmentConfig, SweepAxis, TrainConfig};
use segkit::synth::{self, SynthConfig};

const TABLE_TOL: f64 = 0.2;
const RIDGE_REL_TOL: f64 = 1e-6;
const RIDGE_INSTANCES: usize = 120;
const GRADIENT_TOL: f64 = 1e-6;
const GRADIENT_SEQUENCES: usize = 1000;
const NMS_VECTORS: usize = 1000;
const CLEAN_UTTERANCES: usize = 500;
const CLEAN_TIME_LIMIT: Duration = Duration::from_secs(30);
const NOISY_SEED: u64 = 7;
const NOISY_UTTERANCES: usize = 300;
const MIN_F1_GAP: f64 = 10.0;
const EVAL_TOL_MS: f64 = 20.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&Ctx) -> Outcome);

struct Ctx {
    scratch: tempfile::TempDir,
    noisy: OnceCell<PathBuf>,
}

impl Ctx {
    /// Manifest of the shared noisy corpus, generated on first use.
    fn noisy_manifest(&self) -> &Path {
        self.noisy.get_or_init(|| {
            let cfg = SynthConfig {
                num_utterances: NOISY_UTTERANCES,
                within_word_spike_rate: 0.3,
                within_word_spike_strength: 1.0,
                boundary_strength: 1.0,
                boundary_direction_consistency: 0.9,
                noise_sigma: 0.05,
                seed: NOISY_SEED,
                ..SynthConfig::default()
            };
            let corpus = synth::generate(&cfg).expect("noisy corpus");
            corpus.write(self.scratch.path().join("noisy")).expect("write noisy corpus")
        })
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// ---------------------------------------------------------------------------

/// (name, precision, recall, printed OS, printed R-value, decimals of OS).
const TABLE_ROWS: &[(&str, f64, f64, f64, f64, u32)] = &[
    ("ES-KMeans", 30.7, 18.0, -41.2, 39.7, 1),
    ("BES-GMM", 31.7, 13.8, -56.6, 37.9, 1),
    ("VQ-CPC DP", 15.5, 81.0, 421.4, -266.6, 1),
    ("VQ-VAE DP", 15.8, 68.1, 330.9, -194.5, 1),
    ("AG VQ-CPC DP", 18.2, 54.1, 196.4, -86.5, 1),
    ("AG VQ-VAE DP", 16.4, 56.8, 245.2, -126.5, 1),
    ("Buckeye_SCPC", 35.0, 29.6, -15.4, 44.5, 1),
    ("DSegKNN (Buckeye)", 30.9, 32.0, 3.46, 40.7, 2),
    ("GradSeg (Buckeye)", 44.5, 43.6, -2.0, 52.6, 1),
    ("DSegKNN (YOHO)", 40.8, 45.1, 10.38, 49.0, 2),
    ("GradSeg (YOHO)", 43.8, 43.8, 0.0, 51.9, 1),
];

fn os_r_percent(p: f64, r: f64) -> (f64, f64) {
    let (os, rv) = os_and_r_value(p / 100.0, r / 100.0).expect("positive precision");
    (os * 100.0, rv * 100.0)
}

fn table_consistency(_: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for &(name, p, r, os, rv, _) in TABLE_ROWS {
        let (c_os, c_rv) = os_r_percent(p, r);
        let d = (c_os - os).abs().max((c_rv - rv).abs());
        worst = worst.max(d);
        if d > TABLE_TOL {
            bad.push(format!("{name}: OS {c_os:.2} vs {os}, R {c_rv:.2} vs {rv}"));
        }
    }
    check(
        bad.is_empty(),
        format!(
            "{}/{} rows within ±{TABLE_TOL}, worst |Δ| {worst:.2}{}",
            TABLE_ROWS.len() - bad.len(),
            TABLE_ROWS.len(),
            if bad.is_empty() { String::new() } else { format!("; off: {}", bad.join("; ")) }
        ),
    )
}

/// Printed P and R carry one decimal, so each lies within ±0.05 of its true
/// value. Every row that misses ±0.2 must have its printed OS/R inside the
/// image of that box, i.e. the miss is explained by input rounding alone.
fn table_rounding_interval(_: &Ctx) -> Outcome {
    const STEPS: usize = 40;
    let (mut explained, mut unexplained, mut notes) = (Vec::new(), Vec::new(), Vec::new());
    for &(name, p, r, os, rv, decimals) in TABLE_ROWS {
        let half = 0.5 * 10f64.powi(-(decimals as i32));
        let (mut os_lo, mut os_hi, mut rv_lo, mut rv_hi) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=STEPS {
            for j in 0..=STEPS {
                let pp = p - 0.05 + 0.1 * i as f64 / STEPS as f64;
                let rr = r - 0.05 + 0.1 * j as f64 / STEPS as f64;
                let (a, b) = os_r_percent(pp, rr);
                os_lo = os_lo.min(a);
                os_hi = os_hi.max(a);
                rv_lo = rv_lo.min(b);
                rv_hi = rv_hi.max(b);
            }
        }
        let inside = os >= os_lo - half && os <= os_hi + half && rv >= rv_lo - 0.05 && rv <= rv_hi + 0.05;
        let (c_os, c_rv) = os_r_percent(p, r);
        let within_tol = (c_os - os).abs() <= TABLE_TOL && (c_rv - rv).abs() <= TABLE_TOL;
        match (within_tol, inside) {
            (false, true) => explained.push(name),
            (false, false) => unexplained.push(name),
            (true, false) => notes.push(format!(
                "{name} passes ±{TABLE_TOL} but lies outside its rounding box (OS [{os_lo:.2},{os_hi:.2}], R [{rv_lo:.2},{rv_hi:.2}])"
            )),
            (true, true) => {}
        }
    }
    check(
        unexplained.is_empty(),
        format!(
            "rows off by > ±{TABLE_TOL} explained by input rounding: {explained:?}; unexplained: {unexplained:?}{}",
            if notes.is_empty() { String::new() } else { format!("; note: {}", notes.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------------------

fn objective(x: &[Vec<f64>], y: &[f64], w: &[f64], b: f64, lambda: f64) -> f64 {
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = xi.iter().zip(w).map(|(a, c)| a * c).sum::<f64>() + b - yi;
            r * r
        })
        .sum();
    sse + lambda * w.iter().map(|v| v * v).sum::<f64>()
}

/// Nesterov accelerated gradient with adaptive restart on the ridge
/// objective; `θ = (w, b)`, step `1/L` with `L` bounded by the Hessian trace.
fn descent_minimizer(x: &[Vec<f64>], y: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let d = x[0].len();
    let grad = |th: &[f64]| -> Vec<f64> {
        let mut g = vec![0.0; d + 1];
        for (xi, yi) in x.iter().zip(y) {
            let r = xi.iter().zip(th).map(|(a, c)| a * c).sum::<f64>() + th[d] - yi;
            for k in 0..d {
                g[k] += 2.0 * r * xi[k];
            }
            g[d] += 2.0 * r;
        }
        for k in 0..d {
            g[k] += 2.0 * lambda * th[k];
        }
        g
    };
    let trace: f64 = x.iter().map(|xi| xi.iter().map(|v| v * v).sum::<f64>() + 1.0).sum();
    let step = 1.0 / (2.0 * (trace + lambda * d as f64));
    let f = |th: &[f64]| objective(x, y, &th[..d], th[d], lambda);
    let mut th = vec![0.0; d + 1];
    let mut prev = th.clone();
    let mut t = 1.0f64;
    let mut f_prev = f(&th);
    for _ in 0..400_000 {
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let mom = (t - 1.0) / t_next;
        let look: Vec<f64> = th.iter().zip(&prev).map(|(a, p)| a + mom * (a - p)).collect();
        let g = grad(&look);
        let next: Vec<f64> = look.iter().zip(&g).map(|(a, gi)| a - step * gi).collect();
        let f_next = f(&next);
        prev = std::mem::replace(&mut th, next);
        t = t_next;
        if f_next > f_prev {
            t = 1.0;
            prev = th.clone();
        }
        f_prev = f_next;
        let gn = grad(&th).iter().map(|v| v * v).sum::<f64>().sqrt();
        if gn < 1e-11 * (1.0 + f_prev) {
            break;
        }
    }
    (th[..d].to_vec(), th[d])
}

fn ridge_oracle(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = f64::NEG_INFINITY;
    let mut failures = 0;
    for i in 0..RIDGE_INSTANCES {
        let d = rng.random_range(1..=8);
        let m = rng.random_range(2..=50);
        let lambda = [0.1, 1.0, 10.0][i % 3];
        let offset: f64 = rng.random_range(-2.0..2.0);
        let x: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..d).map(|_| offset + rng.random_range(-1.0..1.0)).collect())
            .collect();
        let labels: Vec<u8> = (0..m).map(|_| rng.random_range(0..=1)).collect();
        let y: Vec<f64> = labels.iter().map(|&l| f64::from(l)).collect();
        let ts = TrainingSet::new(x.concat(), labels, d).map_err(|e| e.to_string())?;
        let model = train_ridge(&ts, lambda).map_err(|e| e.to_string())?;
        let f_closed = objective(&x, &y, &model.weights, model.bias, lambda);
        let (w, b) = descent_minimizer(&x, &y, lambda);
        let f_desc = objective(&x, &y, &w, b, lambda);
        let rel = (f_closed - f_desc) / f_desc.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        if rel > RIDGE_REL_TOL {
            failures += 1;
        }
    }
    check(
        failures == 0,
        format!(
            "{RIDGE_INSTANCES} instances, {failures} above tolerance; max (f_closed − f_descent)/f_descent = {worst:.2e} (≤ {RIDGE_REL_TOL:e})"
        ),
    )
}

// ---------------------------------------------------------------------------

fn brute_magnitudes(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let sq = |a: &[f64], b: &[f64], h: f64| -> f64 {
        a.iter().zip(b).map(|(p, q)| ((p - q) / h).powi(2)).sum()
    };
    (0..n)
        .map(|t| match (t, n) {
            (_, 1) => 0.0,
            (0, _) => sq(&rows[1], &rows[0], 1.0),
            (t, n) if t == n - 1 => sq(&rows[t], &rows[t - 1], 1.0),
            (t, _) => sq(&rows[t + 1], &rows[t - 1], 2.0),
        })
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= GRADIENT_TOL * a.abs().max(b.abs()).max(1.0)
}

fn gradient_oracle(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut oracle_bad, mut shift_bad, mut scale_bad) = (0, 0, 0);
    for _ in 0..GRADIENT_SEQUENCES {
        let n = rng.random_range(1..=60);
        let d = rng.random_range(1..=8);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-3.0..3.0)).collect())
            .collect();
        let seq = FrameSequence::from_rows("s", &rows, 20.0).map_err(|e| e.to_string())?;
        let mags = gradient_magnitude(&seq).magnitudes;
        if !mags.iter().zip(brute_magnitudes(&rows)).all(|(a, b)| close(*a, b)) {
            oracle_bad += 1;
        }
        let c: Vec<f64> = (0..d).map(|_| rng.random_range(-10.0..10.0)).collect();
        let shifted = seq.map_frames(|_, f| f.iter_mut().zip(&c).for_each(|(v, ci)| *v += ci));
        if !gradient_magnitude(&shifted).magnitudes.iter().zip(&mags).all(|(a, b)| close(*a, *b)) {
            shift_bad += 1;
        }
        let alpha: f64 = rng.random_range(0.1..10.0);
        let scaled = seq.map_frames(|_, f| f.iter_mut().for_each(|v| *v *= alpha));
        let ok = gradient_magnitude(&scaled)
            .magnitudes
            .iter()
            .zip(&mags)
            .all(|(a, b)| close(*a, alpha * alpha * b));
        if !ok {
            scale_bad += 1;
        }
    }
    check(
        oracle_bad + shift_bad + scale_bad == 0,
        format!(
            "{GRADIENT_SEQUENCES} sequences at tol {GRADIENT_TOL:e}: oracle mismatches {oracle_bad}, shift {shift_bad}, α² scale {scale_bad}"
        ),
    )
}

// ---------------------------------------------------------------------------

fn nms_contract(_: &Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let period = 20.0;
    let transforms: [fn(f64) -> f64; 3] = [|x| x * x * x + 2.0 * x, |x| x.exp(), |x| 5.0 * x - 7.0];
    let mut errors = Vec::new();
    for i in 0..NMS_VECTORS {
        let n = rng.random_range(1..=200);
        // Coarse grid values keep ties common and transforms order-exact.
        let levels = rng.random_range(2..=400);
        let scores: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0..levels) as f64 / levels as f64 * 4.0 - 2.0)
            .collect();
        let k = rng.random_range(1..=20);
        let r = rng.random_range(0..=10usize);
        let cfg = NmsConfig {
            tau_avg_ms: 300.0,
            tau_min_ms: (r as f64 + 0.25) * period,
            fixed_word_count: Some(k),
        };
        let set = detect_peaks("v", &scores, period, &cfg).map_err(|e| e.to_string())?;
        let b = set.frames();
        if b.len() > k {
            errors.push(format!("#{i}: {} > K={k}", b.len()));
        }
        if b.windows(2).any(|w| w[1] - w[0] <= r) {
            errors.push(format!("#{i}: gap ≤ r={r}"));
        }
        let argmax = (0..n).fold(0, |best, t| if scores[t] > scores[best] { t } else { best });
        if !b.contains(&argmax) {
            errors.push(format!("#{i}: argmax {argmax} missing"));
        }
        for tf in transforms {
            let mapped: Vec<f64> = scores.iter().map(|&x| tf(x)).collect();
            if detect_peaks("v", &mapped, period, &cfg).map_err(|e| e.to_string())? != set {
                errors.push(format!("#{i}: not invariant under a monotone transform"));
            }
        }
    }
    check(
        errors.is_empty(),
        format!(
            "{NMS_VECTORS} vectors × (size, gap, argmax, 3 monotone transforms): {} violations{}",
            errors.len(),
            errors.first().map_or(String::new(), |e| format!(", first {e}"))
        ),
    )
}

// ---------------------------------------------------------------------------

fn clean_end_to_end(ctx: &Ctx) -> Outcome {
    let start = Instant::now();
    let cfg = SynthConfig {
        num_utterances: CLEAN_UTTERANCES,
        noise_sigma: 0.0,
        within_word_spike_rate: 0.0,
        boundary_direction_consistency: 1.0,
        seed: 1,
        ..SynthConfig::default()
    };
    let corpus = synth::generate(&cfg).map_err(|e| e.to_string())?;
    let manifest_path = corpus.write(ctx.scratch.path().join("clean")).map_err(|e| e.to_string())?;
    let manifest = DatasetManifest::load(&manifest_path).map_err(|e| e.to_string())?;
    let train_cfg = TrainConfig {
        percentile: 20.0,
        lambda: 1e7,
        ..TrainConfig::default()
    };
    let (model, _) = pipeline::train(&manifest.without_ground_truth(), &train_cfg).map_err(|e| e.to_string())?;
    let seg = SegmentConfig {
        nms: NmsConfig::default(),
        budget_from_reference: true,
    };
    let hyp = pipeline::segment(&manifest, &model, &seg, 1).map_err(|e| e.to_string())?;
    let reference = pipeline::reference_boundaries(&manifest).map_err(|e| e.to_string())?;
    let one_frame = f64::from(cfg.frame_period_ms);
    let report = pipeline::evaluate(&reference, &hyp, one_frame).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(
        report.f1 == 100.0 && elapsed < CLEAN_TIME_LIMIT,
        format!(
            "{CLEAN_UTTERANCES} utterances, K = words−1, tol 1 frame: F1 {:.2} (need 100), {:.1}s (limit {}s)",
            report.f1,
            elapsed.as_secs_f64(),
            CLEAN_TIME_LIMIT.as_secs()
        ),
    )
}

fn noisy_f1(manifest: &DatasetManifest, percentile: f64) -> Result<f64, String> {
    let cfg = TrainConfig {
        percentile,
        ..TrainConfig::default()
    };
    let rows = pipeline::sweep(
        manifest,
        &cfg,
        SweepAxis::Percentile,
        &[percentile],
        &NmsConfig::default().into(),
        EVAL_TOL_MS,
        1,
    )
    .map_err(|e| e.to_string())?;
    Ok(rows[0].report.f1)
}

fn full_beats_baseline(ctx: &Ctx) -> Outcome {
    let manifest = DatasetManifest::load(ctx.noisy_manifest()).map_err(|e| e.to_string())?;
    let full = noisy_f1(&manifest, 20.0)?;
    let reference = pipeline::reference_boundaries(&manifest).map_err(|e| e.to_string())?;
    let base_hyp = pipeline::baseline_grad(&manifest.without_ground_truth(), &NmsConfig::default().into(), 1)
        .map_err(|e| e.to_string())?;
    let base = pipeline::evaluate(&reference, &base_hyp, EVAL_TOL_MS).map_err(|e| e.to_string())?.f1;
    check(
        full - base >= MIN_F1_GAP,
        format!("seed {NOISY_SEED}: full F1 {full:.2}, gradient baseline F1 {base:.2}, gap {:.2} (need ≥ {MIN_F1_GAP})", full - base),
    )
}

fn percentile_ablation(ctx: &Ctx) -> Outcome {
    let manifest = DatasetManifest::load(ctx.noisy_manifest()).map_err(|e| e.to_string())?;
    let rows = pipeline::sweep(
        &manifest,
        &TrainConfig::default(),
        SweepAxis::Percentile,
        &[20.0, 30.0, 70.0],
        &NmsConfig::default().into(),
        EVAL_TOL_MS,
        1,
    )
    .map_err(|e| e.to_string())?;
    let (f20, f30, f70) = (rows[0].report.f1, rows[1].report.f1, rows[2].report.f1);
    check(
        f20 >= f70 && f30 >= f70,
        format!("seed {NOISY_SEED}: F1@20 {f20:.2}, F1@30 {f30:.2}, F1@70 {f70:.2}"),
    )
}

// ---------------------------------------------------------------------------

fn label_flip_invariance(ctx: &Ctx) -> Outcome {
    let manifest = DatasetManifest::load(ctx.noisy_manifest()).map_err(|e| e.to_string())?;
    let blind = manifest.without_ground_truth();
    let ts: segkit::TrainingSet =
        assemble_training_set(&blind, 100, 0, LabelSource::Pseudo { percentile: 20.0 })
            .map_err(|e| e.to_string())?;
    let flipped = ts.flipped();
    let pairs = [
        ("ridge", train_ridge(&ts, 1e7), train_ridge(&flipped, 1e7)),
        (
            "logistic",
            train_logistic(&ts, 1.0, LogisticOptions::default()),
            train_logistic(&flipped, 1.0, LogisticOptions::default()),
        ),
    ];
    let nms = NmsConfig::default();
    let mut summary = Vec::new();
    let mut all_ok = true;
    for (name, model, model_flip) in pairs {
        let (model, model_flip) = (model.map_err(|e| e.to_string())?, model_flip.map_err(|e| e.to_string())?);
        let (mut tested, mut differ) = (0, 0);
        for entry in blind.entries() {
            if ts.utterance_ids.contains(&entry.utterance_id) {
                continue;
            }
            let seq = blind.load_features(entry).map_err(|e| e.to_string())?.cast::<f64>();
            let period = f64::from(seq.frame_period_ms());
            let s = score(&model, &seq).map_err(|e| e.to_string())?;
            let neg: Vec<f64> = score(&model_flip, &seq).map_err(|e| e.to_string())?.iter().map(|v| -v).collect();
            let a = detect_peaks(&entry.utterance_id, &s, period, &nms).map_err(|e| e.to_string())?;
            let b = detect_peaks(&entry.utterance_id, &neg, period, &nms).map_err(|e| e.to_string())?;
            tested += 1;
            if a != b {
                differ += 1;
            }
        }
        all_ok &= differ == 0;
        summary.push(format!("{name}: {differ}/{tested} test utterances differ"));
    }
    check(all_ok, summary.join(", "))
}

// ---------------------------------------------------------------------------

fn segkit(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_segkit"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("segkit {} failed: {}", args.join(" "), String::from_utf8_lossy(&out.stderr)))
    }
}

fn tree_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).expect("readable dir") {
            let p = e.expect("dir entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn cli_determinism(ctx: &Ctx) -> Outcome {
    let root = ctx.scratch.path().join("cli");
    let run = |tag: &str, jobs: &str| -> Result<PathBuf, String> {
        let dir = root.join(tag);
        let p = |s: &str| dir.join(s).to_string_lossy().into_owned();
        let corpus = p("corpus");
        let manifest = format!("{corpus}/manifest.jsonl");
        segkit(&[
            "synth", "--out", &corpus, "--num-utterances", "40", "--dim", "16", "--seed", "5",
            "--spike-rate", "0.3", "--spike-strength", "1", "--consistency", "0.9",
        ])?;
        segkit(&["train", "--manifest", &manifest, "--out", &p("model.json"), "--report", &p("train.json"), "--num-train", "20", "--seed", "3"])?;
        segkit(&[
            "train", "--manifest", &manifest, "--out", &p("logistic.json"), "--num-train", "20",
            "--objective", "logistic", "--ridge-lambda", "1",
        ])?;
        segkit(&["segment", "--manifest", &manifest, "--model", &p("model.json"), "--out", &p("hyp.jsonl"), "--jobs", jobs])?;
        segkit(&["baseline-grad", "--manifest", &manifest, "--out", &p("base.jsonl"), "--jobs", jobs])?;
        segkit(&[
            "eval", "--reference", &format!("{corpus}/reference.jsonl"), "--hypothesis", &p("hyp.jsonl"),
            "--out", &p("eval.json"),
        ])?;
        segkit(&["supervised", "--manifest", &manifest, "--out", &p("supervised"), "--num-train", "20", "--jobs", jobs])?;
        segkit(&[
            "sweep", "--manifest", &manifest, "--out", &p("sweep.json"), "--values", "20,70",
            "--num-train", "20", "--jobs", jobs,
        ])?;
        Ok(dir)
    };
    let a = tree_bytes(&run("a", "1")?);
    let b = tree_bytes(&run("b", "1")?);
    let c = tree_bytes(&run("c", "4")?);
    let diff = |x: &[(PathBuf, Vec<u8>)], y: &[(PathBuf, Vec<u8>)]| -> Vec<String> {
        if x.len() != y.len() {
            return vec!["file sets differ".into()];
        }
        x.iter()
            .zip(y)
            .filter(|(p, q)| p != q)
            .map(|(p, _)| p.0.display().to_string())
            .collect()
    };
    let (rep, jobs) = (diff(&a, &b), diff(&a, &c));
    check(
        rep.is_empty() && jobs.is_empty(),
        format!(
            "synth/train/segment/baseline-grad/eval/supervised/sweep: {} artifacts; repeat diffs {:?}, --jobs 1 vs 4 diffs {:?}",
            a.len(),
            rep,
            jobs
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: &[Criterion] = &[
        ("1  table OS/R-value self-consistency within ±0.2", table_consistency),
        ("1b rows missing ±0.2 are explained by input rounding", table_rounding_interval),
        ("2  ridge closed form vs descent oracle", ridge_oracle),
        ("3  gradient oracle, shift invariance, α² scale law", gradient_oracle),
        ("4  NMS contract", nms_contract),
        ("5  clean synthetic end to end F1 = 100", clean_end_to_end),
        ("6  full method beats gradient baseline by ≥ 10 F1", full_beats_baseline),
        ("7  percentile ablation: F1@20, F1@30 ≥ F1@70", percentile_ablation),
        ("8  label flip + score negation gives identical boundaries", label_flip_invariance),
        ("9  CLI determinism, independent of --jobs", cli_determinism),
    ];
    let ctx = Ctx {
        scratch: tempfile::tempdir().expect("scratch dir"),
        noisy: OnceCell::new(),
    };
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&ctx)))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("[PASS] {name} — {d} [{secs:.1}s]"),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {name} — {d} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
