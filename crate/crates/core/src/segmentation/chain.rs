//! The per-founder prompt chain: summary, then level, personas and flags,
//! each of the last three reading the summary text.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use super::labels::{FlagVector, LevelLabel, PersonaSet, SegmentLabels};
use super::parse::{parse_flags, parse_level, parse_personas, ParseError};
use super::summary::FounderSummary;
use super::templates::{count_word, PromptSet, TemplateError};
use crate::ingest::FounderRecord;
use crate::llm_gateway::{Gateway, GatewayError, LlmRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Summary,
    Level,
    Personas,
    Flags,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Summary, Stage::Level, Stage::Personas, Stage::Flags];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Summary => "summary",
            Stage::Level => "level",
            Stage::Personas => "personas",
            Stage::Flags => "flags",
        }
    }

    /// Instruction appended to the one corrective re-prompt.
    fn corrective_instruction(self) -> &'static str {
        match self {
            Stage::Summary => "",
            Stage::Level => {
                "Your previous answer could not be read. Reply with ONLY the level assignment, for example \"L10\"."
            }
            Stage::Personas => {
                "Your previous answer could not be read. Reply with ONLY the persona letters in a list, for example \"[D, J]\"."
            }
            Stage::Flags => {
                "Your previous answer could not be read. Reply with ONLY an integer list of 23 values, each 0 or 1, for example \"[0,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]\"."
            }
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StageErrorKind {
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("unparseable after corrective re-prompt: {0}")]
    Parse(ParseError),
    #[error("empty summary")]
    EmptySummary,
    #[error("empty completion")]
    EmptyCompletion,
    #[error("skipped: summary stage failed")]
    Skipped,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("founder {founder_id}, stage {stage}: {kind}")]
pub struct StageError {
    pub founder_id: String,
    pub stage: Stage,
    pub kind: StageErrorKind,
}

/// Decoding parameters shared by every stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSettings {
    pub model_id: String,
    pub temperature: f64,
    pub summary_max_tokens: u32,
    pub label_max_tokens: u32,
}

impl Default for ChainSettings {
    fn default() -> Self {
        Self {
            model_id: "gpt-4o".to_string(),
            temperature: 0.0,
            summary_max_tokens: 2048,
            label_max_tokens: 1024,
        }
    }
}

/// Everything a stage needs: templates, decoding settings and a gateway.
pub struct Segmenter<'a, G: ?Sized> {
    pub gateway: &'a G,
    pub prompts: &'a PromptSet,
    pub settings: &'a ChainSettings,
}

impl<'a, G: Gateway + ?Sized> Segmenter<'a, G> {
    pub fn new(gateway: &'a G, prompts: &'a PromptSet, settings: &'a ChainSettings) -> Self {
        Self {
            gateway,
            prompts,
            settings,
        }
    }

    fn call(&self, prompt: String, max_tokens: u32) -> Result<String, StageErrorKind> {
        let req = LlmRequest::new(
            self.settings.model_id.clone(),
            prompt,
            self.settings.temperature,
            max_tokens,
        )?;
        Ok(self.gateway.complete(&req)?.text)
    }

    pub fn render_summary_prompt(&self, r: &FounderRecord) -> Result<String, TemplateError> {
        self.prompts
            .summary
            .render(&[("linkedin_json", &r.linkedin_doc), ("org_name", &r.org_name)])
    }

    pub fn generate_summary(&self, r: &FounderRecord) -> Result<FounderSummary, StageError> {
        let err = |kind| StageError {
            founder_id: r.founder_id.clone(),
            stage: Stage::Summary,
            kind,
        };
        let prompt = self.render_summary_prompt(r).map_err(|e| err(e.into()))?;
        let text = self
            .call(prompt, self.settings.summary_max_tokens)
            .map_err(err)?;
        if text.trim().is_empty() {
            return Err(err(StageErrorKind::EmptyCompletion));
        }
        Ok(FounderSummary::parse(r.founder_id.clone(), text))
    }

    /// Render, call, parse; on a parse failure re-prompt once with the bad
    /// completion and a stricter instruction.
    fn label_stage<T>(
        &self,
        stage: Stage,
        s: &FounderSummary,
        parse: impl Fn(&str) -> Result<T, ParseError>,
    ) -> Result<T, StageError> {
        let err = |kind| StageError {
            founder_id: s.founder_id.clone(),
            stage,
            kind,
        };
        if s.text.trim().is_empty() {
            return Err(err(StageErrorKind::EmptySummary));
        }
        let template = match stage {
            Stage::Level => &self.prompts.level_label,
            Stage::Personas => &self.prompts.persona_label,
            Stage::Flags => &self.prompts.flags_label,
            Stage::Summary => unreachable!("summary is not a labelling stage"),
        };
        let prompt = template.render(&[("summary", &s.text)]).map_err(|e| err(e.into()))?;
        let max = self.settings.label_max_tokens;
        let first = self.call(prompt.clone(), max).map_err(err)?;
        match parse(&first) {
            Ok(v) => Ok(v),
            Err(_) => {
                let retry = corrective_prompt(&prompt, &first, stage);
                let second = self.call(retry, max).map_err(err)?;
                parse(&second).map_err(|e| err(StageErrorKind::Parse(e)))
            }
        }
    }

    pub fn assign_level(&self, s: &FounderSummary) -> Result<LevelLabel, StageError> {
        self.label_stage(Stage::Level, s, parse_level)
    }

    pub fn assign_personas(&self, s: &FounderSummary) -> Result<PersonaSet, StageError> {
        self.label_stage(Stage::Personas, s, parse_personas)
    }

    pub fn assign_flags(&self, s: &FounderSummary) -> Result<FlagVector, StageError> {
        self.label_stage(Stage::Flags, s, parse_flags)
    }

    /// Asks for a new taxonomy of `target_count` categories built on
    /// `base_taxonomy` (one category per line). Returns the raw completion
    /// for human review.
    pub fn propose_taxonomy(
        &self,
        summaries: &[String],
        base_taxonomy: &str,
        target_count: usize,
    ) -> Result<String, StageErrorKind> {
        if summaries.is_empty() {
            return Err(StageErrorKind::EmptySummary);
        }
        let prompt = render_proposal_prompt(self.prompts, summaries, base_taxonomy, target_count)?;
        let text = self.call(prompt, self.settings.summary_max_tokens)?;
        if text.trim().is_empty() {
            return Err(StageErrorKind::EmptyCompletion);
        }
        Ok(text)
    }

    /// Runs all four stages for one founder. A failing stage is recorded and
    /// the chain continues; if the summary fails the other stages are
    /// skipped.
    pub fn run_chain(&self, r: &FounderRecord) -> ChainOutcome {
        let mut out = ChainOutcome {
            founder_id: r.founder_id.clone(),
            summary: None,
            level: None,
            personas: None,
            flags: None,
            errors: Vec::new(),
        };
        let summary = match self.generate_summary(r) {
            Ok(s) => s,
            Err(e) => {
                out.errors.push(e);
                for stage in [Stage::Level, Stage::Personas, Stage::Flags] {
                    out.errors.push(StageError {
                        founder_id: r.founder_id.clone(),
                        stage,
                        kind: StageErrorKind::Skipped,
                    });
                }
                return out;
            }
        };
        match self.assign_level(&summary) {
            Ok(v) => out.level = Some(v),
            Err(e) => out.errors.push(e),
        }
        match self.assign_personas(&summary) {
            Ok(v) => out.personas = Some(v),
            Err(e) => out.errors.push(e),
        }
        match self.assign_flags(&summary) {
            Ok(v) => out.flags = Some(v),
            Err(e) => out.errors.push(e),
        }
        out.summary = Some(summary);
        out
    }
}

fn corrective_prompt(original: &str, completion: &str, stage: Stage) -> String {
    let mut p = String::with_capacity(original.len() + completion.len() + 256);
    p.push_str(original);
    p.push_str("\n\nPrevious answer:\n");
    p.push_str(completion);
    p.push_str("\n\n");
    p.push_str(stage.corrective_instruction());
    p
}

/// Renders the taxonomy-proposal prompt. Summaries are inserted as a JSON
/// list of strings.
pub fn render_proposal_prompt(
    prompts: &PromptSet,
    summaries: &[String],
    base_taxonomy: &str,
    target_count: usize,
) -> Result<String, TemplateError> {
    let joined = serde_json::to_string(summaries).expect("strings serialize");
    let base = base_taxonomy.trim_end_matches(['\n', '\r']);
    let base_count = base.lines().filter(|l| !l.trim().is_empty()).count();
    prompts.level_proposal.render(&[
        ("summaries", &joined),
        ("base_taxonomy", base),
        ("base_count", &count_word(base_count)),
        ("target_count", &count_word(target_count)),
    ])
}

/// Result of one founder's chain, complete or partial.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutcome {
    pub founder_id: String,
    pub summary: Option<FounderSummary>,
    pub level: Option<LevelLabel>,
    pub personas: Option<PersonaSet>,
    pub flags: Option<FlagVector>,
    pub errors: Vec<StageError>,
}

impl ChainOutcome {
    /// All three labels, if every stage succeeded.
    pub fn labels(&self) -> Option<SegmentLabels> {
        Some(SegmentLabels {
            founder_id: self.founder_id.clone(),
            level: self.level?,
            personas: self.personas.clone()?,
            flags: self.flags?,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.errors.is_empty()
    }
}
