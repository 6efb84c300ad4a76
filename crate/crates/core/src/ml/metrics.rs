//! Confusion counts and the four reported metrics.

use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::split::LabeledSet;
use super::{Classifier, MlError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn new(tp: usize, fp: usize, tn: usize, fn_: usize) -> Self {
        Self { tp, fp, tn, fn_ }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Counts pairs of (predicted, actual). Extra entries in the longer slice
    /// are ignored.
    pub fn from_predictions(predicted: &[bool], actual: &[bool]) -> Self {
        let mut c = Self::default();
        for (&p, &a) in predicted.iter().zip(actual) {
            match (p, a) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fn_ += 1,
            }
        }
        c
    }
}

/// Metrics for one model on one test set. Precision is undefined without
/// positive predictions, TPR without positive labels, and F1 when either is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub precision: Option<f64>,
    pub f1: Option<f64>,
    pub tpr: Option<f64>,
}

impl EvalReport {
    pub fn from_confusion(c: ConfusionMatrix) -> Result<Self, MlError> {
        let n = c.total();
        if n == 0 {
            return Err(MlError::EmptyTestSet);
        }
        let ratio = |a: usize, b: usize| (b > 0).then(|| a as f64 / b as f64);
        let precision = ratio(c.tp, c.tp + c.fp);
        let tpr = ratio(c.tp, c.tp + c.fn_);
        let f1 = match (precision, tpr) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            (Some(_), Some(_)) => Some(0.0),
            _ => None,
        };
        Ok(Self {
            confusion: c,
            accuracy: (c.tp + c.tn) as f64 / n as f64,
            precision,
            f1,
            tpr,
        })
    }
}

pub fn evaluate_predictions(predicted: &[bool], actual: &[bool]) -> Result<EvalReport, MlError> {
    if predicted.len() != actual.len() {
        return Err(MlError::LengthMismatch(actual.len(), predicted.len()));
    }
    EvalReport::from_confusion(ConfusionMatrix::from_predictions(predicted, actual))
}

pub fn evaluate<M: Classifier + ?Sized>(model: &M, test: &LabeledSet, threshold: f64) -> Result<EvalReport, MlError> {
    if test.is_empty() {
        return Err(MlError::EmptyTestSet);
    }
    let predicted: alloc::vec::Vec<bool> = test.x.iter().map(|x| model.predict(x, threshold)).collect();
    evaluate_predictions(&predicted, &test.y)
}

/// Three decimals, or `undefined`.
pub fn format_metric(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.3}"),
        None => String::from("undefined"),
    }
}
