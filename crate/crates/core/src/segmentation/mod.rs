//! Prompt rendering, the per-founder prompt chain, and validation of every
//! structured completion.

mod chain;
mod labels;
mod parse;
mod summary;
mod templates;

pub use chain::{render_proposal_prompt, ChainOutcome, ChainSettings, Segmenter, Stage, StageError, StageErrorKind};
pub use labels::{
    format_level, FlagVector, LevelLabel, Persona, PersonaSet, SegmentLabels, FLAG_COUNT, FLAG_NAMES,
    LEVEL_DESCRIPTIONS, PERSONA_COUNT, PERSONA_DESCRIPTIONS,
};
pub use parse::{parse_flags, parse_level, parse_personas, ParseError};
pub use summary::{parse_money, FounderSummary, PriorCompany, University};
pub use templates::{count_word, PromptKind, PromptSet, PromptTemplate, TemplateError, BASE_LEVELS};
