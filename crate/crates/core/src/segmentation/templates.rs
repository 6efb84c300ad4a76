//! Prompt templates and placeholder substitution.
//!
//! Bodies are loaded from `prompts/*.txt`. Placeholders are `{name}` with
//! `name` made of lowercase ASCII letters and underscores; any other brace is
//! literal text. Substituted values are never rescanned, so JSON documents
//! full of braces are safe to insert.

use alloc::borrow::Cow;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    Summary,
    LevelProposal,
    LevelLabel,
    PersonaLabel,
    FlagsLabel,
}

impl PromptKind {
    pub const ALL: [PromptKind; 5] = [
        PromptKind::Summary,
        PromptKind::LevelProposal,
        PromptKind::LevelLabel,
        PromptKind::PersonaLabel,
        PromptKind::FlagsLabel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PromptKind::Summary => "summary",
            PromptKind::LevelProposal => "level_proposal",
            PromptKind::LevelLabel => "level_label",
            PromptKind::PersonaLabel => "persona_label",
            PromptKind::FlagsLabel => "flags_label",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Opening words of each bundled template.
    fn signature(self) -> &'static str {
        match self {
            PromptKind::Summary => "Look at the data delimited in ### below. This data describes a startup founder.",
            PromptKind::LevelProposal => "Look at the list delimited in ### below.",
            PromptKind::LevelLabel => "Properly understand and analyze the classification of levels",
            PromptKind::PersonaLabel => "The prompt for using founder summary to classify the founder",
            PromptKind::FlagsLabel => "Properly understand and analyze the boolean variables",
        }
    }

    /// Which bundled template a rendered prompt came from, judged by its
    /// opening words.
    pub fn detect(prompt: &str) -> Option<Self> {
        let head = prompt.trim_start();
        Self::ALL.into_iter().find(|k| head.starts_with(k.signature()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TemplateError {
    #[error("template `{template}` has no value for placeholder `{{{placeholder}}}`")]
    Unfilled { template: &'static str, placeholder: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    kind: PromptKind,
    body: Cow<'static, str>,
}

impl PromptTemplate {
    pub fn new(kind: PromptKind, body: impl Into<Cow<'static, str>>) -> Self {
        Self {
            kind,
            body: body.into(),
        }
    }

    pub fn builtin(kind: PromptKind) -> Self {
        let body = match kind {
            PromptKind::Summary => include_str!("../../prompts/summary.txt"),
            PromptKind::LevelProposal => include_str!("../../prompts/level_proposal.txt"),
            PromptKind::LevelLabel => include_str!("../../prompts/level_label.txt"),
            PromptKind::PersonaLabel => include_str!("../../prompts/persona_label.txt"),
            PromptKind::FlagsLabel => include_str!("../../prompts/flags_label.txt"),
        };
        Self::new(kind, body)
    }

    pub fn kind(&self) -> PromptKind {
        self.kind
    }

    pub fn body(&self) -> &str {
        &self.body
    }

    /// Distinct placeholder names, in first-occurrence order.
    pub fn placeholders(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let mut rest = self.body.as_ref();
        while let Some((name, after)) = next_placeholder(rest) {
            if let Some(name) = name {
                if !out.contains(&name) {
                    out.push(name);
                }
            }
            rest = after;
        }
        out
    }

    /// Replaces every placeholder with its value. Fails if any placeholder
    /// has no value; unused values are ignored.
    pub fn render(&self, vars: &[(&str, &str)]) -> Result<String, TemplateError> {
        let mut out = String::with_capacity(self.body.len() + vars.iter().map(|(_, v)| v.len()).sum::<usize>());
        let mut rest = self.body.as_ref();
        loop {
            let Some(open) = rest.find('{') else {
                out.push_str(rest);
                break;
            };
            out.push_str(&rest[..open]);
            let tail = &rest[open..];
            match placeholder_name(tail) {
                Some(name) => {
                    let value = vars.iter().find(|(k, _)| *k == name).map(|(_, v)| *v).ok_or_else(|| {
                        TemplateError::Unfilled {
                            template: self.kind.name(),
                            placeholder: name.to_string(),
                        }
                    })?;
                    out.push_str(value);
                    rest = &tail[name.len() + 2..];
                }
                None => {
                    out.push('{');
                    rest = &tail[1..];
                }
            }
        }
        Ok(out)
    }
}

/// `Some(name)` when `s` starts with `{name}`.
fn placeholder_name(s: &str) -> Option<&str> {
    let inner = s.strip_prefix('{')?;
    let close = inner.find('}')?;
    let name = &inner[..close];
    (!name.is_empty() && name.bytes().all(|b| b.is_ascii_lowercase() || b == b'_')).then_some(name)
}

fn next_placeholder(s: &str) -> Option<(Option<&str>, &str)> {
    let open = s.find('{')?;
    let tail = &s[open..];
    match placeholder_name(tail) {
        Some(name) => Some((Some(name), &tail[name.len() + 2..])),
        None => Some((None, &tail[1..])),
    }
}

/// The five templates used by one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptSet {
    pub summary: PromptTemplate,
    pub level_proposal: PromptTemplate,
    pub level_label: PromptTemplate,
    pub persona_label: PromptTemplate,
    pub flags_label: PromptTemplate,
}

impl Default for PromptSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl PromptSet {
    pub fn builtin() -> Self {
        Self {
            summary: PromptTemplate::builtin(PromptKind::Summary),
            level_proposal: PromptTemplate::builtin(PromptKind::LevelProposal),
            level_label: PromptTemplate::builtin(PromptKind::LevelLabel),
            persona_label: PromptTemplate::builtin(PromptKind::PersonaLabel),
            flags_label: PromptTemplate::builtin(PromptKind::FlagsLabel),
        }
    }

    pub fn get(&self, kind: PromptKind) -> &PromptTemplate {
        match kind {
            PromptKind::Summary => &self.summary,
            PromptKind::LevelProposal => &self.level_proposal,
            PromptKind::LevelLabel => &self.level_label,
            PromptKind::PersonaLabel => &self.persona_label,
            PromptKind::FlagsLabel => &self.flags_label,
        }
    }

    pub fn set(&mut self, template: PromptTemplate) {
        match template.kind {
            PromptKind::Summary => self.summary = template,
            PromptKind::LevelProposal => self.level_proposal = template,
            PromptKind::LevelLabel => self.level_label = template,
            PromptKind::PersonaLabel => self.persona_label = template,
            PromptKind::FlagsLabel => self.flags_label = template,
        }
    }
}

/// The five-level starting taxonomy the level proposal builds on.
pub const BASE_LEVELS: &str = include_str!("../../data/base_levels.txt");

/// English word for small counts, digits otherwise.
pub fn count_word(n: usize) -> Cow<'static, str> {
    const WORDS: [&str; 21] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven", "twelve",
        "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty",
    ];
    match WORDS.get(n) {
        Some(w) => Cow::Borrowed(w),
        None => Cow::Owned(alloc::format!("{n}")),
    }
}
