//! Train/test split, three classifiers and their evaluation.
//!
//! Every model exposes a real-valued score and predicts the positive class
//! when that score reaches the configured threshold. For the linear model the
//! score is the fitted value, for the forest the fraction of trees voting
//! positive, and for boosted trees the sigmoid of the additive margin.

pub mod forest;
pub mod gbt;
pub mod linear;
pub mod metrics;
pub mod split;
pub mod tree;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

pub use forest::{Forest, ForestParams, FeatureSubsample};
pub use gbt::{GbtModel, GbtParams};
pub use linear::{LinearModel, DEFAULT_RIDGE};
pub use metrics::{evaluate, evaluate_predictions, format_metric, ConfusionMatrix, EvalReport};
pub use split::{make_split, LabeledSet, Split, SplitError, SplitSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MlError {
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("feature rows have different lengths")]
    RaggedRows,
    #[error("{0} labels for {1} rows")]
    LengthMismatch(usize, usize),
    #[error("normal equations are singular")]
    Singular,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("model expects {expected} features, got {got}")]
    WidthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Linear,
    Forest,
    Gbt,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Linear, ModelKind::Forest, ModelKind::Gbt];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Forest => "forest",
            ModelKind::Gbt => "gbt",
        }
    }

    /// Row label used in the metrics table.
    pub fn display_name(self) -> &'static str {
        match self {
            ModelKind::Linear => "Linear regression",
            ModelKind::Forest => "Random forest",
            ModelKind::Gbt => "Gradient-boosted trees",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Hyperparameters for all three model kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    pub threshold: f64,
    pub ridge: f64,
    pub forest: ForestParams,
    pub gbt: GbtParams,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            threshold: 0.5,
            ridge: DEFAULT_RIDGE,
            forest: ForestParams::default(),
            gbt: GbtParams::default(),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<(), MlError> {
        let bad = |m: &str| Err(MlError::InvalidParams(m.into()));
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return bad("threshold must lie strictly between 0 and 1");
        }
        if !(self.ridge >= 0.0 && self.ridge.is_finite()) {
            return bad("ridge must be a finite non-negative number");
        }
        self.forest.validate()?;
        self.gbt.validate()
    }
}

/// Anything that scores a feature row.
pub trait Classifier {
    fn score(&self, x: &[f64]) -> f64;

    fn predict(&self, x: &[f64], threshold: f64) -> bool {
        self.score(x) >= threshold
    }
}

impl Classifier for LinearModel {
    fn score(&self, x: &[f64]) -> f64 {
        LinearModel::score(self, x)
    }
}

/// A fitted model of any kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "model", rename_all = "lowercase")]
pub enum TrainedModel {
    Linear(LinearModel),
    Forest(Forest),
    Gbt(GbtModel),
}

impl TrainedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            TrainedModel::Linear(_) => ModelKind::Linear,
            TrainedModel::Forest(_) => ModelKind::Forest,
            TrainedModel::Gbt(_) => ModelKind::Gbt,
        }
    }
}

impl Classifier for TrainedModel {
    fn score(&self, x: &[f64]) -> f64 {
        match self {
            TrainedModel::Linear(m) => m.score(x),
            TrainedModel::Forest(m) => m.score(x),
            TrainedModel::Gbt(m) => m.score(x),
        }
    }
}

pub(crate) fn check_training(x: &[Vec<f64>], y: &[bool]) -> Result<usize, MlError> {
    if x.is_empty() {
        return Err(MlError::EmptyTrainingSet);
    }
    if x.len() != y.len() {
        return Err(MlError::LengthMismatch(y.len(), x.len()));
    }
    let d = x[0].len();
    if x.iter().any(|r| r.len() != d) {
        return Err(MlError::RaggedRows);
    }
    Ok(d)
}

/// Fits one model of `kind` on `train`.
pub fn train(kind: ModelKind, train: &LabeledSet, params: &ModelParams) -> Result<TrainedModel, MlError> {
    params.validate()?;
    check_training(&train.x, &train.y)?;
    Ok(match kind {
        ModelKind::Linear => TrainedModel::Linear(LinearModel::fit(&train.x, &train.y, params.ridge)?),
        ModelKind::Forest => TrainedModel::Forest(Forest::fit(&train.x, &train.y, &params.forest)?),
        ModelKind::Gbt => TrainedModel::Gbt(GbtModel::fit(&train.x, &train.y, &params.gbt)?),
    })
}

/// On-disk envelope for a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub threshold: f64,
    pub n_features: usize,
    #[serde(flatten)]
    pub model: TrainedModel,
}

impl ModelFile {
    pub const FORMAT_VERSION: u32 = 1;

    pub fn new(model: TrainedModel, threshold: f64, n_features: usize) -> Self {
        Self {
            format_version: Self::FORMAT_VERSION,
            threshold,
            n_features,
            model,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, MlError> {
        let f: Self = serde_json::from_str(s).map_err(|e| MlError::InvalidParams(alloc::format!("model file: {e}")))?;
        if f.format_version != Self::FORMAT_VERSION {
            return Err(MlError::InvalidParams(alloc::format!(
                "unsupported model format version {}",
                f.format_version
            )));
        }
        Ok(f)
    }
}
