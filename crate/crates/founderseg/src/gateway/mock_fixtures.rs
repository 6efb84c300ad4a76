//! Mock completions on disk, one JSON object per line:
//!
//! ```text
//! {"kind":"level_label","founder_id":"syn-0001","completion":"L4"}
//! {"kind":"level_proposal","completion":"..."}          (default for a kind)
//! {"prompt_sha256":"<hex>","completion":"..."}          (exact prompt)
//! ```

use std::io::Write;
use std::path::Path;

use founderseg_core::llm_gateway::MockBackend;
use founderseg_core::segmentation::PromptKind;
use serde::{Deserialize, Serialize};

use crate::error::{format_err, io_err, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockFixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub founder_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prompt_sha256: Option<String>,
    pub completion: String,
}

pub fn load_mock_fixtures(path: &Path) -> Result<MockBackend> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let mut mock = MockBackend::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let at = |m: String| format_err(path, format!("line {}: {m}", i + 1));
        let f: MockFixture = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        match (f.prompt_sha256, f.kind, f.founder_id) {
            (Some(fp), _, _) => mock.insert_fingerprint(fp, f.completion),
            (None, Some(kind), founder) => {
                let kind = PromptKind::from_name(&kind).ok_or_else(|| at(format!("unknown prompt kind `{kind}`")))?;
                match founder {
                    Some(id) => mock.insert_founder(kind, &id, f.completion),
                    None => mock.insert_kind_default(kind, f.completion),
                }
            }
            (None, None, _) => return Err(at("needs `kind` or `prompt_sha256`".into())),
        }
    }
    Ok(mock)
}

pub fn write_mock_fixtures(path: &Path, fixtures: &[MockFixture]) -> Result<()> {
    let mut out = Vec::new();
    for f in fixtures {
        serde_json::to_writer(&mut out, f).expect("fixture serializes");
        out.write_all(b"\n").expect("vec write");
    }
    crate::artifacts::write_atomic(path, &out)
}
