//! Founder tables as CSV: header row, `linkedin_json` and `org_name`
//! required, `founder_id` optional.

use std::path::Path;

use founderseg_core::ingest::{Dataset, FounderRecord, Provenance};

use crate::error::{format_err, io_err, Error, Result};

/// A data row that was not loaded. `row` counts data rows from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSkip {
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedTable {
    pub dataset: Dataset,
    pub skipped: Vec<RowSkip>,
}

/// Reads one founder table; every record gets `success`.
///
/// Rows without an `org_name` value, or that the reader cannot decode, are
/// skipped and reported. A missing `founder_id` becomes `<file name>:<row>`.
pub fn load_founder_table(path: &Path, success: bool) -> Result<LoadedTable> {
    let file = std::fs::File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader.headers().map_err(|e| format_err(path, e))?.clone();
    let col = |name: &'static str| headers.iter().position(|h| h.trim() == name);
    let doc_col = col("linkedin_json").ok_or(Error::MissingColumn {
        path: path.to_path_buf(),
        column: "linkedin_json",
    })?;
    let org_col = col("org_name").ok_or(Error::MissingColumn {
        path: path.to_path_buf(),
        column: "org_name",
    })?;
    let id_col = col("founder_id");
    let file_name = path
        .file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = match row {
            Ok(r) => r,
            Err(e) => {
                skipped.push(RowSkip {
                    row: row_no,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let org = row.get(org_col).map(str::trim).unwrap_or("");
        if org.is_empty() {
            skipped.push(RowSkip {
                row: row_no,
                reason: "missing org_name".into(),
            });
            continue;
        }
        let founder_id = id_col
            .and_then(|c| row.get(c))
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map_or_else(|| format!("{file_name}:{row_no}"), str::to_string);
        records.push(FounderRecord {
            founder_id,
            linkedin_doc: row.get(doc_col).unwrap_or("").to_string(),
            org_name: org.to_string(),
            success,
        });
    }
    let dataset = Dataset::new(
        records,
        Provenance {
            sources: vec![file_name],
            seed: None,
        },
    )?;
    Ok(LoadedTable { dataset, skipped })
}
