use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::LabeledMatrix;

/// Class composition of the train/test partition.
///
/// Each class is shuffled and its first `pool_per_class` rows form the
/// pool; the two test sets are drawn from the front of the pool and the rest
/// of the pool is the training set. With the defaults and a 150/150 matrix
/// that is 240 training rows, a 28/2 test set and a 15/15 test set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub pool_per_class: usize,
    pub test1_negatives: usize,
    pub test1_positives: usize,
    pub test2_negatives: usize,
    pub test2_positives: usize,
    pub seed: u64,
}

impl SplitSpec {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            pool_per_class: 150,
            test1_negatives: 28,
            test1_positives: 2,
            test2_negatives: 15,
            test2_positives: 15,
            seed,
        }
    }

    pub fn train_size(&self) -> usize {
        2 * self.pool_per_class
            - self.test1_negatives
            - self.test1_positives
            - self.test2_negatives
            - self.test2_positives
    }
}

/// Rows of one partition, in matrix order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LabeledSet {
    pub ids: Vec<String>,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<bool>,
}

impl LabeledSet {
    pub fn new(x: Vec<Vec<f64>>, y: Vec<bool>) -> Self {
        let ids = (0..y.len()).map(|i| alloc::format!("{i}")).collect();
        Self { ids, x, y }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.y.iter().filter(|y| **y).count()
    }

    pub fn n_features(&self) -> usize {
        self.x.first().map_or(0, Vec::len)
    }

    fn from_indices(m: &LabeledMatrix, mut idx: Vec<usize>) -> Self {
        idx.sort_unstable();
        let rows = m.rows();
        Self {
            ids: idx.iter().map(|&i| rows[i].founder_id.clone()).collect(),
            x: idx.iter().map(|&i| rows[i].features.values().to_vec()).collect(),
            y: idx.iter().map(|&i| rows[i].success).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train: LabeledSet,
    pub test1: LabeledSet,
    pub test2: LabeledSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("need {needed} {} rows, matrix has {available}", if *.success { "successful" } else { "unsuccessful" })]
    Insufficient {
        success: bool,
        needed: usize,
        available: usize,
    },
    #[error("test sets need more rows than the pool holds")]
    BadSpec,
}

pub fn make_split(m: &LabeledMatrix, spec: &SplitSpec) -> Result<Split, SplitError> {
    if spec.test1_negatives + spec.test2_negatives > spec.pool_per_class
        || spec.test1_positives + spec.test2_positives > spec.pool_per_class
    {
        return Err(SplitError::BadSpec);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut parts: [Vec<usize>; 3] = Default::default();
    for (class, n1, n2) in [
        (true, spec.test1_positives, spec.test2_positives),
        (false, spec.test1_negatives, spec.test2_negatives),
    ] {
        let mut idx: Vec<usize> = (0..m.len()).filter(|&i| m.rows()[i].success == class).collect();
        if idx.len() < spec.pool_per_class {
            return Err(SplitError::Insufficient {
                success: class,
                needed: spec.pool_per_class,
                available: idx.len(),
            });
        }
        idx.shuffle(&mut rng);
        idx.truncate(spec.pool_per_class);
        parts[1].extend_from_slice(&idx[..n1]);
        parts[2].extend_from_slice(&idx[n1..n1 + n2]);
        parts[0].extend_from_slice(&idx[n1 + n2..]);
    }
    let [train, test1, test2] = parts;
    Ok(Split {
        train: LabeledSet::from_indices(m, train),
        test1: LabeledSet::from_indices(m, test1),
        test2: LabeledSet::from_indices(m, test2),
    })
}
