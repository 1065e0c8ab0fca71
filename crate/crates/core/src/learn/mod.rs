//! Classifiers, metrics and cross-validation shared by all experiments.

mod cv;
mod forest;
mod linear;
mod metrics;
mod model_file;

use thiserror::Error;

pub use cv::{cross_validate, CrossValidation, MeanReport, Pipeline};
pub use forest::{train_forest, ForestConfig, ForestModel, Node, Tree};
pub use linear::{train_linear, train_linear_traced, LinearConfig, LinearModel, LinearSolver};
pub use metrics::{evaluate, evaluate_with_classes, naive_baseline, ClassMetrics, ConstantPredictor, EvaluationReport};
pub use model_file::{ModelFile, TrainedModel, MODEL_FILE_VERSION};

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("training data has a single class ({0:?})")]
    SingleClass(String),
    #[error("no training examples")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("length mismatch: {0} predictions for {1} gold labels")]
    Length(usize, usize),
    #[error("unknown class label {0:?}")]
    UnknownLabel(String),
    #[error("fold {fold}: training side lacks class {class:?}")]
    MissingClass { fold: usize, class: String },
    #[error("fold {fold}: group {group:?} appears in both training and test data")]
    Leakage { fold: usize, group: String },
    #[error("test document {0:?} was seen while building the vocabulary or scaling statistics")]
    TestLeak(String),
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("model was trained with vocabulary {expected}, got {found}")]
    VocabularyChecksum { expected: String, found: String },
    #[error("unsupported model file version {0}")]
    Version(u32),
    #[error("cannot access {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("pipeline: {0}")]
    Pipeline(String),
}

fn check_dims(xs: &[crate::features::FeatureVector]) -> Result<usize, LearnError> {
    let dim = xs.first().ok_or(LearnError::Empty)?.dim;
    if let Some(x) = xs.iter().find(|x| x.dim != dim) {
        return Err(LearnError::Dimension {
            expected: dim,
            found: x.dim,
        });
    }
    Ok(dim)
}
