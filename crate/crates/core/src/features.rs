//! Fixed-width numeric encoding of one founder and the labelled matrix fed to
//! analytics and models.
//!
//! Column layout (55 columns):
//!
//! | offset | width | content                                  |
//! |--------|-------|------------------------------------------|
//! | 0      | 1     | `highest_edu`, 0..=3                     |
//! | 1      | 10    | `field_0`..`field_9`, multi-hot          |
//! | 11     | 1     | `level`, ordinal 1..=10                  |
//! | 12     | 20    | `persona_A`..`persona_T`, indicators     |
//! | 32     | 23    | boolean flags in prompt order            |

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::edu_features::{DegreeCode, FieldCodeSet};
use crate::ingest::Dataset;
use crate::segmentation::{Persona, SegmentLabels, FLAG_COUNT, FLAG_NAMES, PERSONA_COUNT};

pub const FEATURE_WIDTH: usize = 55;
pub const HIGHEST_EDU_COL: usize = 0;
pub const FIELD_OFFSET: usize = 1;
pub const FIELD_COUNT: usize = 10;
pub const LEVEL_COL: usize = FIELD_OFFSET + FIELD_COUNT;
pub const PERSONA_OFFSET: usize = LEVEL_COL + 1;
pub const FLAG_OFFSET: usize = PERSONA_OFFSET + PERSONA_COUNT;

const _: () = assert!(FLAG_OFFSET + FLAG_COUNT == FEATURE_WIDTH);

/// Column names in layout order.
pub fn column_names() -> Vec<String> {
    let mut names = Vec::with_capacity(FEATURE_WIDTH);
    names.push("highest_edu".to_string());
    names.extend((0..FIELD_COUNT).map(|i| format!("field_{i}")));
    names.push("level".to_string());
    names.extend(Persona::all().map(|p| format!("persona_{}", p.letter())));
    names.extend(FLAG_NAMES.iter().map(|n| n.to_string()));
    names
}

/// Education features computed from the profile.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EduFeatures {
    pub highest: DegreeCode,
    pub fields: FieldCodeSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FeatureVector(Vec<f64>);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeatureError {
    #[error("feature vector has {0} values, expected 55")]
    Width(usize),
    #[error("column {column} (`{name}`) holds {value}, outside its domain")]
    Domain { column: usize, name: String, value: f64 },
    #[error("persona block is all zero")]
    NoPersona,
    #[error("matrix header does not match the feature layout")]
    Header,
    #[error("duplicate founder_id `{0}` in matrix")]
    DuplicateFounder(String),
}

impl FeatureVector {
    /// Validates width and per-block domains.
    pub fn from_values(values: Vec<f64>) -> Result<Self, FeatureError> {
        if values.len() != FEATURE_WIDTH {
            return Err(FeatureError::Width(values.len()));
        }
        let names = column_names();
        for (i, &v) in values.iter().enumerate() {
            let ok = match i {
                HIGHEST_EDU_COL => matches!(v, 0.0 | 1.0 | 2.0 | 3.0),
                LEVEL_COL => libm::trunc(v) == v && (1.0..=10.0).contains(&v),
                _ => v == 0.0 || v == 1.0,
            };
            if !ok {
                return Err(FeatureError::Domain {
                    column: i,
                    name: names[i].clone(),
                    value: v,
                });
            }
        }
        if values[PERSONA_OFFSET..FLAG_OFFSET].iter().all(|v| *v == 0.0) {
            return Err(FeatureError::NoPersona);
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn highest_edu(&self) -> u8 {
        self.0[HIGHEST_EDU_COL] as u8
    }

    pub fn has_field(&self, code: u8) -> bool {
        (code as usize) < FIELD_COUNT && self.0[FIELD_OFFSET + code as usize] == 1.0
    }

    pub fn level(&self) -> u8 {
        self.0[LEVEL_COL] as u8
    }

    pub fn has_persona(&self, p: Persona) -> bool {
        self.0[PERSONA_OFFSET + p.index()] == 1.0
    }

    pub fn flag(&self, i: usize) -> bool {
        self.0[FLAG_OFFSET + i] == 1.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = FeatureError;
    fn try_from(v: Vec<f64>) -> Result<Self, FeatureError> {
        FeatureVector::from_values(v)
    }
}

impl From<FeatureVector> for Vec<f64> {
    fn from(f: FeatureVector) -> Vec<f64> {
        f.0
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

pub fn build_feature_vector(edu: &EduFeatures, labels: &SegmentLabels) -> FeatureVector {
    let mut v = alloc::vec![0.0; FEATURE_WIDTH];
    v[HIGHEST_EDU_COL] = f64::from(edu.highest.value());
    for code in edu.fields.iter() {
        v[FIELD_OFFSET + code as usize] = 1.0;
    }
    v[LEVEL_COL] = f64::from(labels.level.value());
    for p in labels.personas.iter() {
        v[PERSONA_OFFSET + p.index()] = 1.0;
    }
    for (i, f) in labels.flags.iter().enumerate() {
        v[FLAG_OFFSET + i] = indicator(f);
    }
    FeatureVector(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRow {
    pub founder_id: String,
    pub features: FeatureVector,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    column_names: Vec<String>,
    rows: Vec<MatrixRow>,
}

impl Default for LabeledMatrix {
    fn default() -> Self {
        Self {
            column_names: column_names(),
            rows: Vec::new(),
        }
    }
}

/// A sampled founder left out of the matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exclusion {
    pub founder_id: String,
    pub reason: String,
}

impl LabeledMatrix {
    pub fn new(rows: Vec<MatrixRow>) -> Result<Self, FeatureError> {
        let mut seen = alloc::collections::BTreeSet::new();
        for r in &rows {
            if !seen.insert(r.founder_id.as_str()) {
                return Err(FeatureError::DuplicateFounder(r.founder_id.clone()));
            }
        }
        Ok(Self {
            column_names: column_names(),
            rows,
        })
    }

    /// Like [`LabeledMatrix::new`] but also checks a header read from disk.
    pub fn with_header(header: &[String], rows: Vec<MatrixRow>) -> Result<Self, FeatureError> {
        if header != column_names().as_slice() {
            return Err(FeatureError::Header);
        }
        Self::new(rows)
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn rows(&self) -> &[MatrixRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn count_class(&self, success: bool) -> usize {
        self.rows.iter().filter(|r| r.success == success).count()
    }
}

/// One row per founder of `dataset` (in dataset order) that has a feature
/// vector; founders without one are reported as exclusions.
pub fn build_matrix(dataset: &Dataset, features: &BTreeMap<String, FeatureVector>) -> (LabeledMatrix, Vec<Exclusion>) {
    let mut rows = Vec::with_capacity(dataset.len());
    let mut excluded = Vec::new();
    for r in dataset.records() {
        match features.get(&r.founder_id) {
            Some(f) => rows.push(MatrixRow {
                founder_id: r.founder_id.clone(),
                features: f.clone(),
                success: r.success,
            }),
            None => excluded.push(Exclusion {
                founder_id: r.founder_id.clone(),
                reason: "no feature vector (segmentation incomplete)".to_string(),
            }),
        }
    }
    // Dataset ids are unique, so rows are too.
    let m = LabeledMatrix {
        column_names: column_names(),
        rows,
    };
    (m, excluded)
}
