//! Gradient-boosted regression trees on logistic loss, fitted with
//! second-order (Newton) leaf weights.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{NewtonGrower, Tree};
use super::{check_training, Classifier, MlError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GbtParams {
    /// Zero rounds is allowed and yields the base-rate model.
    pub rounds: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub lambda: f64,
    pub min_child_weight: f64,
    /// Row fraction drawn without replacement per round.
    pub subsample: f64,
    pub seed: u64,
}

impl Default for GbtParams {
    fn default() -> Self {
        Self {
            rounds: 200,
            learning_rate: 0.1,
            max_depth: 3,
            lambda: 1.0,
            min_child_weight: 1.0,
            subsample: 1.0,
            seed: 0,
        }
    }
}

impl GbtParams {
    pub fn validate(&self) -> Result<(), MlError> {
        let ok = self.learning_rate > 0.0
            && self.learning_rate.is_finite()
            && self.max_depth >= 1
            && self.lambda >= 0.0
            && self.min_child_weight >= 0.0
            && self.subsample > 0.0
            && self.subsample <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(MlError::InvalidParams(format!("invalid boosting parameters: {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbtModel {
    pub base_margin: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
    /// Mean training log loss before the first round and after each round.
    pub train_loss: Vec<f64>,
}

pub fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-z))
}

/// Mean binary cross-entropy of margins against labels.
pub fn log_loss(margins: &[f64], y: &[bool]) -> f64 {
    // log(1 + e^-m) for positives, log(1 + e^m) for negatives
    let total: f64 = margins
        .iter()
        .zip(y)
        .map(|(&m, &t)| softplus(if t { -m } else { m }))
        .sum();
    total / margins.len() as f64
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + libm::log1p(libm::exp(-z))
    } else {
        libm::log1p(libm::exp(z))
    }
}

impl GbtModel {
    pub fn fit(x: &[Vec<f64>], y: &[bool], p: &GbtParams) -> Result<Self, MlError> {
        p.validate()?;
        check_training(x, y)?;
        let n = x.len();
        let rate = y.iter().filter(|v| **v).count() as f64 / n as f64;
        let rate = rate.clamp(1e-6, 1.0 - 1e-6);
        let base_margin = libm::log(rate / (1.0 - rate));
        let mut margins = vec![base_margin; n];
        let mut train_loss = vec![log_loss(&margins, y)];
        let mut trees = Vec::with_capacity(p.rounds);
        let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
        let take = ((p.subsample * n as f64) as usize).clamp(1, n);
        let mut g = vec![0.0; n];
        let mut h = vec![0.0; n];
        for _ in 0..p.rounds {
            for i in 0..n {
                let q = sigmoid(margins[i]);
                g[i] = q - if y[i] { 1.0 } else { 0.0 };
                h[i] = q * (1.0 - q);
            }
            let mut rows: Vec<usize> = if take == n {
                (0..n).collect()
            } else {
                let mut r = sample(&mut rng, n, take).into_vec();
                r.sort_unstable();
                r
            };
            let tree = NewtonGrower {
                x,
                g: &g,
                h: &h,
                max_depth: p.max_depth,
                lambda: p.lambda,
                min_child_weight: p.min_child_weight,
            }
            .grow(&mut rows);
            for (m, xi) in margins.iter_mut().zip(x) {
                *m += p.learning_rate * tree.predict(xi);
            }
            train_loss.push(log_loss(&margins, y));
            trees.push(tree);
        }
        Ok(Self {
            base_margin,
            learning_rate: p.learning_rate,
            trees,
            train_loss,
        })
    }

    pub fn margin(&self, x: &[f64]) -> f64 {
        self.trees
            .iter()
            .fold(self.base_margin, |m, t| m + self.learning_rate * t.predict(x))
    }

    /// Probability of the positive class.
    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.margin(x))
    }
}

impl Classifier for GbtModel {
    fn score(&self, x: &[f64]) -> f64 {
        GbtModel::score(self, x)
    }
}
