//! Linear frame classifier: training sets, ridge and logistic fits, scoring.

mod linalg;
mod logistic;
mod model;
mod ridge;
mod training_set;

pub use linalg::SquareMatrix;
pub use logistic::{logistic_loss, train_logistic, LogisticOptions};
pub use model::{score, FitInfo, LinearModel, Objective};
pub use ridge::{ridge_objective, train_ridge};
pub use training_set::{assemble_training_set, LabelSource, TrainingSet};
