//! File formats of a run directory.
//!
//! ```text
//! <run>/
//!   manifest.json
//!   artifacts/  sample.jsonl  labels.jsonl  features.csv  models/<kind>.json
//!   reports/    *.txt and *.csv tables
//!   cache/      llm.jsonl
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};

use founderseg_core::features::{column_names, FeatureVector, LabeledMatrix, MatrixRow};
use founderseg_core::ingest::{Dataset, Provenance};
use founderseg_core::ml::{ModelFile, ModelKind};
use founderseg_core::segmentation::{ChainOutcome, FlagVector, LevelLabel, PersonaSet};
use serde::{Deserialize, Serialize};

use crate::error::{format_err, io_err, Result};

pub const MANIFEST: &str = "manifest.json";
pub const SAMPLE: &str = "artifacts/sample.jsonl";
pub const LABELS: &str = "artifacts/labels.jsonl";
pub const FEATURES: &str = "artifacts/features.csv";
pub const CACHE: &str = "cache/llm.jsonl";

/// Layout helper rooted at a run directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDir {
    root: PathBuf,
}

impl RunDir {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    pub fn model(&self, kind: ModelKind) -> PathBuf {
        self.root.join("artifacts/models").join(format!("{}.json", kind.name()))
    }

    pub fn report(&self, name: &str) -> PathBuf {
        self.root.join("reports").join(name)
    }
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).and_then(|_| f.sync_all()).map_err(io_err(&tmp))?;
    std::fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

pub fn write_sample(path: &Path, d: &Dataset) -> Result<()> {
    write_atomic(path, d.to_jsonl().as_bytes())
}

pub fn read_sample(path: &Path) -> Result<Dataset> {
    let text = read_text(path)?;
    Dataset::from_jsonl(&text, Provenance::default()).map_err(|e| format_err(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub message: String,
}

/// One line of `labels.jsonl`. Missing labels mean the stage failed; the
/// reason is in `errors`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub founder_id: String,
    pub summary: Option<String>,
    pub level: Option<LevelLabel>,
    pub personas: Option<PersonaSet>,
    pub flags: Option<FlagVector>,
    #[serde(default)]
    pub errors: Vec<StageFailure>,
}

impl From<&ChainOutcome> for LabelRecord {
    fn from(o: &ChainOutcome) -> Self {
        Self {
            founder_id: o.founder_id.clone(),
            summary: o.summary.as_ref().map(|s| s.text.clone()),
            level: o.level,
            personas: o.personas.clone(),
            flags: o.flags,
            errors: o
                .errors
                .iter()
                .map(|e| StageFailure {
                    stage: e.stage.name().to_string(),
                    message: e.kind.to_string(),
                })
                .collect(),
        }
    }
}

impl LabelRecord {
    pub fn is_complete(&self) -> bool {
        self.errors.is_empty() && self.level.is_some() && self.personas.is_some() && self.flags.is_some()
    }
}

pub fn write_labels(path: &Path, labels: &[LabelRecord]) -> Result<()> {
    let mut out = Vec::new();
    for l in labels {
        serde_json::to_writer(&mut out, l).expect("label record serializes");
        out.push(b'\n');
    }
    write_atomic(path, &out)
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRecord>> {
    let text = read_text(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| format_err(path, format!("line {}: {e}", i + 1))))
        .collect()
}

/// `founder_id`, the 55 feature columns as integers, then `success` (1/0).
pub fn render_features_csv(m: &LabeledMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["founder_id".to_string()];
    header.extend(m.column_names().iter().cloned());
    header.push("success".into());
    w.write_record(&header).expect("in-memory csv");
    for r in m.rows() {
        let mut rec = vec![r.founder_id.clone()];
        rec.extend(r.features.values().iter().map(|v| format!("{}", *v as i64)));
        rec.push(if r.success { "1" } else { "0" }.into());
        w.write_record(&rec).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

pub fn write_features(path: &Path, m: &LabeledMatrix) -> Result<()> {
    write_atomic(path, render_features_csv(m).as_bytes())
}

/// Parses `features.csv`, checking the header and every value's domain.
pub fn parse_features_csv(text: &str) -> std::result::Result<LabeledMatrix, String> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(|e| e.to_string())?.iter().map(str::to_string).collect();
    let width = column_names().len();
    if header.len() != width + 2 || header[0] != "founder_id" || header[width + 1] != "success" {
        return Err("unexpected header".into());
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| format!("line {line}: {e}"))?;
        if rec.len() != width + 2 {
            return Err(format!("line {line}: {} fields, expected {}", rec.len(), width + 2));
        }
        let values = (1..=width)
            .map(|c| {
                rec[c]
                    .trim()
                    .parse::<i64>()
                    .map(|v| v as f64)
                    .map_err(|_| format!("line {line}: `{}` is not an integer", &rec[c]))
            })
            .collect::<std::result::Result<Vec<f64>, String>>()?;
        let features = FeatureVector::from_values(values).map_err(|e| format!("line {line}: {e}"))?;
        let success = match rec[width + 1].trim() {
            "1" => true,
            "0" => false,
            other => return Err(format!("line {line}: success must be 0 or 1, got `{other}`")),
        };
        rows.push(MatrixRow {
            founder_id: rec[0].to_string(),
            features,
            success,
        });
    }
    LabeledMatrix::with_header(&header[1..=width], rows).map_err(|e| e.to_string())
}

pub fn read_features(path: &Path) -> Result<LabeledMatrix> {
    parse_features_csv(&read_text(path)?).map_err(|e| format_err(path, e))
}

pub fn write_model(path: &Path, m: &ModelFile) -> Result<()> {
    let mut text = m.to_json();
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn read_model(path: &Path) -> Result<ModelFile> {
    ModelFile::from_json(&read_text(path)?).map_err(|e| format_err(path, e))
}

/// Two-column `founder_id,reason` CSV.
pub fn render_reasons_csv<'a>(rows: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["founder_id", "reason"]).expect("in-memory csv");
    for (id, reason) in rows {
        w.write_record([id, reason.as_str()]).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}
