//! Least-squares linear model used as a classifier.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::MlError;

/// Ridge term added to the diagonal of the normal equations (intercept
/// excluded). One-hot blocks make the plain design rank deficient.
pub const DEFAULT_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub intercept: f64,
    pub weights: Vec<f64>,
    pub ridge: f64,
}

impl LinearModel {
    /// Fits `y ~ intercept + w.x` by solving
    /// `(X'X + ridge * D) b = X'y`, where `D` is the identity with a zero in
    /// the intercept slot. Labels are 0/1.
    pub fn fit(x: &[Vec<f64>], y: &[bool], ridge: f64) -> Result<Self, MlError> {
        if x.is_empty() {
            return Err(MlError::EmptyTrainingSet);
        }
        let d = x[0].len();
        if x.iter().any(|r| r.len() != d) {
            return Err(MlError::RaggedRows);
        }
        let p = d + 1;
        let mut a = vec![0.0; p * p];
        let mut b = vec![0.0; p];
        let mut row = vec![0.0; p];
        for (xi, &yi) in x.iter().zip(y) {
            row[0] = 1.0;
            row[1..].copy_from_slice(xi);
            let t = if yi { 1.0 } else { 0.0 };
            for j in 0..p {
                let rj = row[j];
                if rj == 0.0 {
                    continue;
                }
                b[j] += rj * t;
                for k in j..p {
                    a[j * p + k] += rj * row[k];
                }
            }
        }
        for j in 0..p {
            for k in 0..j {
                a[j * p + k] = a[k * p + j];
            }
        }
        for j in 1..p {
            a[j * p + j] += ridge;
        }
        let coef = match cholesky_solve(&a, &b, p) {
            Some(c) => c,
            None => {
                // ridge = 0 on a rank-deficient design
                let bump = ridge.max(1e-9);
                for j in 0..p {
                    a[j * p + j] += bump;
                }
                cholesky_solve(&a, &b, p).ok_or(MlError::Singular)?
            }
        };
        Ok(Self {
            intercept: coef[0],
            weights: coef[1..].to_vec(),
            ridge,
        })
    }

    pub fn score(&self, x: &[f64]) -> f64 {
        self.intercept + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }
}

/// Solves `A z = b` for symmetric positive-definite `A` (row-major, `n x n`).
fn cholesky_solve(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = libm::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * z[k];
        }
        z[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = z[i];
        for k in i + 1..n {
            s -= l[k * n + i] * z[k];
        }
        z[i] = s / l[i * n + i];
    }
    Some(z)
}
