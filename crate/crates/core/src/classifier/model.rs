use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::FrameSequence;
use crate::scalar::{dot, Scalar};
use crate::TOOLKIT_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Ridge,
    Logistic,
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ridge" => Ok(Objective::Ridge),
            "logistic" => Ok(Objective::Logistic),
            other => Err(Error::argument(format!("unknown objective {other:?}"))),
        }
    }
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Objective::Ridge => "ridge",
            Objective::Logistic => "logistic",
        })
    }
}

/// Solver metadata. Ridge is exact: one iteration, always converged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitInfo {
    pub iterations: usize,
    pub converged: bool,
}

/// Affine frame scorer `s = w·f + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub lambda: T,
    pub objective: Objective,
    pub fit: FitInfo,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    objective: Objective,
    lambda: f64,
    bias: f64,
    weights: Vec<f64>,
    feature_dim: usize,
    toolkit_version: String,
    iterations: usize,
    converged: bool,
}

impl<T: Scalar> LinearModel<T> {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn score_frame(&self, frame: &[T]) -> T {
        dot(&self.weights, frame) + self.bias
    }

    pub fn cast<U: Scalar>(&self) -> LinearModel<U> {
        LinearModel {
            weights: self.weights.iter().map(|w| U::of(w.as_f64())).collect(),
            bias: U::of(self.bias.as_f64()),
            lambda: U::of(self.lambda.as_f64()),
            objective: self.objective,
            fit: self.fit,
        }
    }

    /// Pretty-printed JSON with a fixed field order.
    pub fn to_json(&self) -> String {
        let file = ModelFile {
            objective: self.objective,
            lambda: self.lambda.as_f64(),
            bias: self.bias.as_f64(),
            weights: self.weights.iter().map(|w| w.as_f64()).collect(),
            feature_dim: self.dim(),
            toolkit_version: TOOLKIT_VERSION.to_owned(),
            iterations: self.fit.iterations,
            converged: self.fit.converged,
        };
        let mut s = serde_json::to_string_pretty(&file).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::format(format!("bad model file: {e}")))?;
        if file.weights.len() != file.feature_dim {
            return Err(Error::data(format!(
                "model declares feature_dim {} but has {} weights",
                file.feature_dim,
                file.weights.len()
            )));
        }
        if file.weights.iter().chain([&file.bias]).any(|w| !w.is_finite()) {
            return Err(Error::data("model parameters must be finite"));
        }
        Ok(Self {
            weights: file.weights.into_iter().map(T::of).collect(),
            bias: T::of(file.bias),
            lambda: T::of(file.lambda),
            objective: file.objective,
            fit: FitInfo {
                iterations: file.iterations,
                converged: file.converged,
            },
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Raw affine score of every frame, for both objectives.
pub fn score<T: Scalar>(model: &LinearModel<T>, seq: &FrameSequence<T>) -> Result<Vec<T>> {
    if seq.dim() != model.dim() {
        return Err(Error::argument(format!(
            "model expects dimension {}, {} has {}",
            model.dim(),
            seq.utterance_id(),
            seq.dim()
        )));
    }
    Ok(seq.frames().map(|f| model.score_frame(f)).collect())
}
