//! Run configuration: one TOML file plus command-line overrides.
//!
//! Relative paths in the file are resolved against the file's directory.

use std::path::{Path, PathBuf};

use founderseg_core::ml::{ModelParams, SplitSpec};
use founderseg_core::segmentation::ChainSettings;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::gateway::RetryPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Live,
    Mock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Seeds {
    pub sample: u64,
    pub split: u64,
    pub models: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self {
            sample: 7,
            split: 11,
            models: 13,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LlmConfig {
    pub backend: BackendChoice,
    pub endpoint: Option<String>,
    pub model_id: String,
    pub temperature: f64,
    pub summary_max_tokens: u32,
    pub label_max_tokens: u32,
    pub max_in_flight: usize,
    pub timeout_secs: u64,
    pub retry: RetryPolicy,
    /// Required for the mock backend.
    pub mock_fixtures: Option<PathBuf>,
    /// Defaults to `cache/llm.jsonl` in the run directory.
    pub cache: Option<PathBuf>,
}

impl Default for LlmConfig {
    fn default() -> Self {
        let chain = ChainSettings::default();
        Self {
            backend: BackendChoice::Mock,
            endpoint: None,
            model_id: chain.model_id,
            temperature: chain.temperature,
            summary_max_tokens: chain.summary_max_tokens,
            label_max_tokens: chain.label_max_tokens,
            max_in_flight: 4,
            timeout_secs: 120,
            retry: RetryPolicy::default(),
            mock_fixtures: None,
            cache: None,
        }
    }
}

impl LlmConfig {
    pub fn chain_settings(&self) -> ChainSettings {
        ChainSettings {
            model_id: self.model_id.clone(),
            temperature: self.temperature,
            summary_max_tokens: self.summary_max_tokens,
            label_max_tokens: self.label_max_tokens,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaxonomyConfig {
    /// Categories requested from the model.
    pub target_count: usize,
    /// Summaries included in the prompt, taken in sample order.
    pub max_summaries: usize,
    /// One category per line; the bundled ten-level list when absent.
    pub base: Option<PathBuf>,
}

impl Default for TaxonomyConfig {
    fn default() -> Self {
        Self {
            target_count: 10,
            max_summaries: 30,
            base: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub successful: Option<PathBuf>,
    pub unsuccessful: Option<PathBuf>,
    pub n_per_class: usize,
    pub out_dir: PathBuf,
    /// Alternative keyword file for education mapping.
    pub keywords: Option<PathBuf>,
    /// Fraction of founders allowed to fail segmentation before the exit
    /// code turns nonzero.
    pub failure_tolerance: f64,
    pub min_gap_pp: f64,
    pub seeds: Seeds,
    pub llm: LlmConfig,
    pub taxonomy: TaxonomyConfig,
    pub split: SplitSpec,
    pub models: ModelParams,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            successful: None,
            unsuccessful: None,
            n_per_class: 150,
            out_dir: PathBuf::from("run"),
            keywords: None,
            failure_tolerance: 0.0,
            min_gap_pp: founderseg_core::analytics::DEFAULT_MIN_GAP_PP,
            seeds: Seeds::default(),
            llm: LlmConfig::default(),
            taxonomy: TaxonomyConfig::default(),
            split: SplitSpec::with_seed(0),
            models: ModelParams::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut c = Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        resolve(base, &mut c.successful);
        resolve(base, &mut c.unsuccessful);
        resolve(base, &mut c.keywords);
        resolve(base, &mut c.llm.mock_fixtures);
        resolve(base, &mut c.llm.cache);
        resolve(base, &mut c.taxonomy.base);
        if c.out_dir.is_relative() {
            c.out_dir = base.join(&c.out_dir);
        }
        Ok(c)
    }

    /// Checks that need no file access.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.n_per_class < 1 {
            return bad("n_per_class must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.failure_tolerance) {
            return bad("failure_tolerance must lie in [0, 1]");
        }
        if !(self.min_gap_pp.is_finite() && self.min_gap_pp >= 0.0) {
            return bad("min_gap_pp must be a non-negative number");
        }
        if self.llm.max_in_flight < 1 {
            return bad("llm.max_in_flight must be at least 1");
        }
        if !(self.llm.temperature.is_finite() && self.llm.temperature >= 0.0) {
            return bad("llm.temperature must be a non-negative number");
        }
        if self.taxonomy.target_count < 1 || self.taxonomy.max_summaries < 1 {
            return bad("taxonomy.target_count and taxonomy.max_summaries must be at least 1");
        }
        self.effective_models().validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Model parameters with the model seed applied.
    pub fn effective_models(&self) -> ModelParams {
        let mut p = self.models.clone();
        p.forest.seed = self.seeds.models;
        p.gbt.seed = self.seeds.models;
        p
    }

    pub fn effective_split(&self) -> SplitSpec {
        SplitSpec {
            seed: self.seeds.split,
            ..self.split.clone()
        }
    }

    pub fn cache_path(&self) -> PathBuf {
        self.llm
            .cache
            .clone()
            .unwrap_or_else(|| self.out_dir.join(crate::artifacts::CACHE))
    }

    /// The configuration with every path cut down to its file name, so the
    /// same settings hash alike wherever the run directory lives.
    pub fn location_free(&self) -> Self {
        let name = |p: &Option<PathBuf>| p.as_ref().and_then(|p| p.file_name()).map(PathBuf::from);
        let mut c = self.clone();
        c.successful = name(&self.successful);
        c.unsuccessful = name(&self.unsuccessful);
        c.keywords = name(&self.keywords);
        c.llm.mock_fixtures = name(&self.llm.mock_fixtures);
        c.llm.cache = name(&self.llm.cache);
        c.taxonomy.base = name(&self.taxonomy.base);
        c.out_dir = PathBuf::new();
        c
    }
}
