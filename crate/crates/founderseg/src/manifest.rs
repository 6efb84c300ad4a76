//! `manifest.json`: what produced a run directory and a hash of every file
//! in it. Contains no timestamps, so identical runs give identical bytes.

use std::path::Path;

use founderseg_core::content_hash;
use founderseg_core::edu_features::KeywordTable;
use founderseg_core::ml::ModelFile;
use serde::{Deserialize, Serialize};

use crate::artifacts::{write_atomic, RunDir, MANIFEST};
use crate::config::RunConfig;
use crate::error::{io_err, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileHash {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub core_version: String,
    pub model_format_version: u32,
    pub keyword_table_version: u32,
    pub config_sha256: String,
    pub config: RunConfig,
    pub inputs: Vec<FileHash>,
    pub files: Vec<FileHash>,
}

fn hash_file(path: &Path, label: String) -> Result<FileHash> {
    let bytes = std::fs::read(path).map_err(io_err(path))?;
    Ok(FileHash {
        path: label,
        bytes: bytes.len() as u64,
        sha256: content_hash(&bytes),
    })
}

fn collect(dir: &Path, rel: &str, out: &mut Vec<FileHash>) -> Result<()> {
    let Ok(entries) = std::fs::read_dir(dir) else {
        return Ok(());
    };
    for e in entries {
        let e = e.map_err(io_err(dir))?;
        let name = e.file_name().to_string_lossy().into_owned();
        let rel = format!("{rel}/{name}");
        let path = e.path();
        if path.is_dir() {
            collect(&path, &rel, out)?;
        } else if !name.ends_with(".tmp") {
            out.push(hash_file(&path, rel)?);
        }
    }
    Ok(())
}

/// Builds the manifest for `run`. Input files are hashed under their
/// role and file name. The LLM cache is left out: it records creation times
/// and its line order follows request completion order.
pub fn build(run: &RunDir, config: &RunConfig, keywords: &KeywordTable) -> Result<Manifest> {
    let mut inputs = Vec::new();
    for (role, p) in [
        ("successful", &config.successful),
        ("unsuccessful", &config.unsuccessful),
        ("keywords", &config.keywords),
        ("mock_fixtures", &config.llm.mock_fixtures),
        ("taxonomy_base", &config.taxonomy.base),
    ] {
        let Some(p) = p.as_deref().filter(|p| p.is_file()) else {
            continue;
        };
        let name = p.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        inputs.push(hash_file(p, format!("{role}:{name}"))?);
    }
    let mut files = Vec::new();
    for top in ["artifacts", "reports"] {
        collect(&run.path(top), top, &mut files)?;
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let config = config.location_free();
    let config_json = serde_json::to_vec(&config).expect("config serializes");
    Ok(Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: founderseg_core::VERSION.to_string(),
        model_format_version: ModelFile::FORMAT_VERSION,
        keyword_table_version: keywords.version(),
        config_sha256: content_hash(&config_json),
        config,
        inputs,
        files,
    })
}

pub fn write(run: &RunDir, config: &RunConfig, keywords: &KeywordTable) -> Result<Manifest> {
    let m = build(run, config, keywords)?;
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    write_atomic(&run.path(MANIFEST), text.as_bytes())?;
    Ok(m)
}
