//! Bagged Gini trees with per-node feature subsampling.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tree::{GiniGrower, Tree};
use super::{check_training, Classifier, MlError};

/// How many features each node may examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureSubsample {
    /// `floor(sqrt(d))`, at least 1.
    Sqrt,
    All,
    Fixed(usize),
}

impl FeatureSubsample {
    pub fn count(self, d: usize) -> usize {
        let k = match self {
            FeatureSubsample::Sqrt => libm::floor(libm::sqrt(d as f64)) as usize,
            FeatureSubsample::All => d,
            FeatureSubsample::Fixed(k) => k.min(d),
        };
        k.max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub feature_subsample: FeatureSubsample,
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            max_depth: 8,
            min_samples_split: 2,
            feature_subsample: FeatureSubsample::Sqrt,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<(), MlError> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_samples_split < 2 {
            return Err(MlError::InvalidParams(format!(
                "forest needs n_trees >= 1, max_depth >= 1, min_samples_split >= 2 (got {}, {}, {})",
                self.n_trees, self.max_depth, self.min_samples_split
            )));
        }
        if self.feature_subsample == FeatureSubsample::Fixed(0) {
            return Err(MlError::InvalidParams("forest feature count must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    /// Tree `t` draws from its own ChaCha stream, so each tree depends only
    /// on the seed and its index.
    pub fn fit(x: &[Vec<f64>], y: &[bool], p: &ForestParams) -> Result<Self, MlError> {
        p.validate()?;
        let d = check_training(x, y)?;
        let n = x.len();
        let mtry = p.feature_subsample.count(d);
        let trees = (0..p.n_trees)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
                rng.set_stream(t as u64);
                let mut rows: Vec<usize> = if p.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                GiniGrower {
                    x,
                    y,
                    max_depth: p.max_depth,
                    min_samples_split: p.min_samples_split,
                    mtry,
                    rng: &mut rng,
                }
                .grow(&mut rows)
            })
            .collect();
        Ok(Self { trees })
    }

    /// Fraction of trees whose leaf is majority positive.
    pub fn score(&self, x: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict(x) >= 0.5).count();
        votes as f64 / self.trees.len() as f64
    }
}

impl Classifier for Forest {
    fn score(&self, x: &[f64]) -> f64 {
        Forest::score(self, x)
    }
}
