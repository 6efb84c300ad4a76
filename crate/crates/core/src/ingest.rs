//! Founder records, dataset assembly, validity filtering and the balanced
//! working sample.
//!
//! Reading the source CSV files is IO and happens in the `founderseg` crate;
//! this module only deals with records that are already in memory.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One founder as it appears in the source tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FounderRecord {
    pub founder_id: String,
    /// The LinkedIn profile serialized as JSON text, exactly as read.
    #[serde(rename = "linkedin_json")]
    pub linkedin_doc: String,
    pub org_name: String,
    pub success: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub sources: Vec<String>,
    pub seed: Option<u64>,
}

/// An ordered, duplicate-free collection of founders.
///
/// Immutable once built: every transformation returns a new dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    records: Vec<FounderRecord>,
    provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IngestError {
    #[error("duplicate founder_id `{0}`")]
    DuplicateFounderId(String),
    #[error("need {needed} {} records, only {available} available", class_name(*.success))]
    InsufficientRecords {
        success: bool,
        needed: usize,
        available: usize,
    },
    #[error("line {line}: {message}")]
    Deserialize { line: usize, message: String },
}

fn class_name(success: bool) -> &'static str {
    if success {
        "successful"
    } else {
        "unsuccessful"
    }
}

/// Why a record was left out by [`filter_valid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DroppedRecord {
    pub founder_id: String,
    pub reason: InvalidDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidDoc {
    #[error("empty linkedin document")]
    Empty,
    #[error("malformed linkedin document: {0}")]
    Malformed(String),
    #[error("linkedin document is not a JSON object")]
    NotAnObject,
}

impl Dataset {
    pub fn new(records: Vec<FounderRecord>, provenance: Provenance) -> Result<Self, IngestError> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.founder_id.as_str()) {
                return Err(IngestError::DuplicateFounderId(r.founder_id.clone()));
            }
        }
        Ok(Self {
            records,
            provenance,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[FounderRecord] {
        &self.records
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count_class(&self, success: bool) -> usize {
        self.records.iter().filter(|r| r.success == success).count()
    }

    pub fn get(&self, founder_id: &str) -> Option<&FounderRecord> {
        self.records.iter().find(|r| r.founder_id == founder_id)
    }

    /// Canonical serialization: one JSON object per line, `\n` terminated.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            // Serializing a struct of strings and a bool cannot fail.
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str, provenance: Provenance) -> Result<Self, IngestError> {
        let mut records = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let r: FounderRecord =
                serde_json::from_str(line).map_err(|e| IngestError::Deserialize {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            records.push(r);
        }
        Self::new(records, provenance)
    }
}

/// Concatenates the two tables, successful founders first.
///
/// Each input keeps its own success flags; callers normally load them with
/// `success = true` and `success = false` respectively.
pub fn merge_and_flag(successful: &Dataset, unsuccessful: &Dataset) -> Result<Dataset, IngestError> {
    let records: Vec<FounderRecord> = successful
        .records
        .iter()
        .chain(unsuccessful.records.iter())
        .cloned()
        .collect();
    let mut sources = successful.provenance.sources.clone();
    sources.extend(unsuccessful.provenance.sources.iter().cloned());
    Dataset::new(
        records,
        Provenance {
            sources,
            seed: None,
        },
    )
}

/// Checks that a profile is a non-empty, well-formed JSON object.
pub fn validate_doc(doc: &str) -> Result<(), InvalidDoc> {
    if doc.trim().is_empty() {
        return Err(InvalidDoc::Empty);
    }
    let value: serde_json::Value =
        serde_json::from_str(doc).map_err(|e| InvalidDoc::Malformed(e.to_string()))?;
    if value.is_object() {
        Ok(())
    } else {
        Err(InvalidDoc::NotAnObject)
    }
}

/// Keeps the records whose profile passes [`validate_doc`], in order, and
/// reports every dropped record.
pub fn filter_valid(d: &Dataset) -> (Dataset, Vec<DroppedRecord>) {
    let mut kept = Vec::with_capacity(d.records.len());
    let mut dropped = Vec::new();
    for r in &d.records {
        match validate_doc(&r.linkedin_doc) {
            Ok(()) => kept.push(r.clone()),
            Err(reason) => dropped.push(DroppedRecord {
                founder_id: r.founder_id.clone(),
                reason,
            }),
        }
    }
    let out = Dataset {
        records: kept,
        provenance: d.provenance.clone(),
    };
    (out, dropped)
}

/// Draws `n_per_class` founders from each class without replacement.
///
/// Each class is shuffled with a ChaCha8 generator seeded from `seed`
/// (successful class first, then unsuccessful, from the same stream) and the
/// first `n_per_class` are kept. Output lists the successful sample first.
pub fn stratified_sample(d: &Dataset, n_per_class: usize, seed: u64) -> Result<Dataset, IngestError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * n_per_class);
    for class in [true, false] {
        let mut pool: Vec<&FounderRecord> = d.records.iter().filter(|r| r.success == class).collect();
        if pool.len() < n_per_class {
            return Err(IngestError::InsufficientRecords {
                success: class,
                needed: n_per_class,
                available: pool.len(),
            });
        }
        pool.shuffle(&mut rng);
        out.extend(pool.into_iter().take(n_per_class).cloned());
    }
    Ok(Dataset {
        records: out,
        provenance: Provenance {
            sources: d.provenance.sources.clone(),
            seed: Some(seed),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::format;
    use alloc::vec;

    fn rec(id: &str, doc: &str, success: bool) -> FounderRecord {
        FounderRecord {
            founder_id: id.to_string(),
            linkedin_doc: doc.to_string(),
            org_name: "Acme".to_string(),
            success,
        }
    }

    fn synthetic(n_pos: usize, n_neg: usize) -> Dataset {
        let mut v = Vec::new();
        for i in 0..n_pos {
            v.push(rec(&format!("p{i}"), "{}", true));
        }
        for i in 0..n_neg {
            v.push(rec(&format!("n{i}"), "{}", false));
        }
        Dataset::new(v, Provenance::default()).unwrap()
    }

    #[test]
    fn duplicate_ids_rejected() {
        let err = Dataset::new(vec![rec("a", "{}", true), rec("a", "{}", false)], Provenance::default());
        assert_eq!(err, Err(IngestError::DuplicateFounderId("a".into())));
    }

    #[test]
    fn merge_orders_successful_first() {
        let a = Dataset::new(vec![rec("a1", "{}", true), rec("a2", "{}", true)], Provenance::default()).unwrap();
        let b = Dataset::new(
            vec![rec("b1", "{}", false), rec("b2", "{}", false), rec("b3", "{}", false)],
            Provenance::default(),
        )
        .unwrap();
        let m = merge_and_flag(&a, &b).unwrap();
        assert_eq!(m.len(), 5);
        assert!(m.records()[..2].iter().all(|r| r.success));
        assert!(m.records()[2..].iter().all(|r| !r.success));
    }

    #[test]
    fn merge_of_empties_is_empty() {
        let m = merge_and_flag(&Dataset::empty(), &Dataset::empty()).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn merge_rejects_overlap() {
        let a = Dataset::new(vec![rec("x", "{}", true)], Provenance::default()).unwrap();
        let b = Dataset::new(vec![rec("x", "{}", false)], Provenance::default()).unwrap();
        assert!(matches!(merge_and_flag(&a, &b), Err(IngestError::DuplicateFounderId(_))));
    }

    #[test]
    fn filter_drops_empty_and_truncated() {
        let d = Dataset::new(
            vec![
                rec("ok", r#"{"name":"A"}"#, true),
                rec("empty", "", true),
                rec("blank", "   ", true),
                rec("trunc", r#"{"name":"A","education":[{"school":"X"}"#, false),
                rec("array", "[1,2]", false),
            ],
            Provenance::default(),
        )
        .unwrap();
        let (kept, dropped) = filter_valid(&d);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept.records()[0].founder_id, "ok");
        assert_eq!(dropped.len(), 4);
        assert_eq!(dropped[0].reason, InvalidDoc::Empty);
        assert!(matches!(dropped[2].reason, InvalidDoc::Malformed(_)));
        assert_eq!(dropped[3].reason, InvalidDoc::NotAnObject);
    }

    #[test]
    fn sample_counts_and_determinism() {
        let d = synthetic(40, 55);
        let a = stratified_sample(&d, 12, 99).unwrap();
        let b = stratified_sample(&d, 12, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count_class(true), 12);
        assert_eq!(a.count_class(false), 12);
        assert_eq!(a.provenance().seed, Some(99));
        let c = stratified_sample(&d, 12, 100).unwrap();
        assert_ne!(a.records(), c.records());
    }

    #[test]
    fn sample_zero_is_empty() {
        let d = synthetic(3, 3);
        assert!(stratified_sample(&d, 0, 5).unwrap().is_empty());
    }

    #[test]
    fn sample_insufficient() {
        let d = synthetic(3, 10);
        assert_eq!(
            stratified_sample(&d, 4, 1),
            Err(IngestError::InsufficientRecords {
                success: true,
                needed: 4,
                available: 3
            })
        );
    }

    #[test]
    fn jsonl_round_trip() {
        let d = Dataset::new(
            vec![rec("a", "{\"k\":\"line\\nbreak \\\"q\\\"\"}", true), rec("b", "", false)],
            Provenance::default(),
        )
        .unwrap();
        let text = d.to_jsonl();
        assert_eq!(text.lines().count(), 2);
        let back = Dataset::from_jsonl(&text, Provenance::default()).unwrap();
        assert_eq!(back, d);
    }
}
