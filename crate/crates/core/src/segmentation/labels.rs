use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// Entrepreneurial level, `L1` (nascent) to `L10` (serial multi-exit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct LevelLabel(u8);

impl LevelLabel {
    pub const MIN: u8 = 1;
    pub const MAX: u8 = 10;

    pub fn new(level: u8) -> Option<Self> {
        (Self::MIN..=Self::MAX).contains(&level).then_some(Self(level))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = LevelLabel> {
        (Self::MIN..=Self::MAX).map(LevelLabel)
    }
}

impl fmt::Display for LevelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}", self.0)
    }
}

impl TryFrom<u8> for LevelLabel {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        LevelLabel::new(v).ok_or_else(|| format!("level {v} outside 1..=10"))
    }
}

impl From<LevelLabel> for u8 {
    fn from(l: LevelLabel) -> u8 {
        l.0
    }
}

/// `L<k>`; the inverse of [`super::parse_level`].
pub fn format_level(level: LevelLabel) -> String {
    format!("{level}")
}

/// Level descriptions used in reports, highest first.
pub const LEVEL_DESCRIPTIONS: [(&str, &str); 10] = [
    ("L10", "Serial entrepreneur with multiple 100M+ exits"),
    ("L9", "Previously led a unicorn startup"),
    ("L8", "Tech visionary or industry innovator"),
    ("L7", "Scaled a previous startup with 50M-100M funding"),
    ("L6", "Executive with medium to large exits"),
    ("L5", "Previous company 100M+ funded with pending IPO"),
    ("L4", "Small/medium exit or notable tech role"),
    ("L3", "10-15 years technical and management expertise"),
    ("L2", "Few years of startup experience or accelerator alum"),
    ("L1", "New to tech with high potential"),
];

/// One of the twenty founder personas, `A` through `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "char", into = "char")]
pub struct Persona(u8);

pub const PERSONA_COUNT: usize = 20;

/// Persona definitions in letter order.
///
/// These were produced by an unsupervised LLM step and are kept as generated.
/// Two of them encode protected or sensitive attributes: (R) military service
/// and (S) gender. Treat any analysis that uses them as a bias probe rather
/// than a selection criterion.
pub const PERSONA_DESCRIPTIONS: [&str; PERSONA_COUNT] = [
    "Successful serial entrepreneur who built a public company",
    "Successful serial entrepreneur who had a company with exit over $100M",
    "Fresh graduate entrepreneur who founded a company within a year after university",
    "First-time entrepreneur who founded a company within 3-5 years of finishing university",
    "Holds a PhD or is/was a researcher or professor",
    "First-time non-tech entrepreneur with 10+ years in non-tech industries",
    "Tech executive at tech companies for over 10 years",
    "Engineer/executive at a unicorn company",
    "Engineer or product manager at a tech firm",
    "Founder with an MBA",
    "Lived or worked in multiple countries",
    "Serial entrepreneur with at least two companies started before",
    "Corporate background with less than 10 years of total experience",
    "Background in finance, accounting, or economics",
    "Pivoted from arts/humanities to tech entrepreneurship",
    "Nonprofit or social entrepreneurship experience",
    "Notable awards or industry recognition",
    "Military service background",
    "Female founder with notable achievements in male-dominated industries",
    "None of the above",
];

impl Persona {
    pub fn from_letter(c: char) -> Option<Self> {
        let u = c.to_ascii_uppercase();
        ('A'..='T').contains(&u).then(|| Persona(u as u8 - b'A'))
    }

    pub fn from_index(i: usize) -> Option<Self> {
        (i < PERSONA_COUNT).then_some(Persona(i as u8))
    }

    pub fn letter(self) -> char {
        (b'A' + self.0) as char
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn description(self) -> &'static str {
        PERSONA_DESCRIPTIONS[self.index()]
    }

    pub fn all() -> impl Iterator<Item = Persona> {
        (0..PERSONA_COUNT as u8).map(Persona)
    }
}

impl fmt::Display for Persona {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl TryFrom<char> for Persona {
    type Error = String;
    fn try_from(c: char) -> Result<Self, String> {
        Persona::from_letter(c).ok_or_else(|| format!("persona `{c}` outside A..=T"))
    }
}

impl From<Persona> for char {
    fn from(p: Persona) -> char {
        p.letter()
    }
}

/// Non-empty set of personas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Persona>", into = "Vec<Persona>")]
pub struct PersonaSet(BTreeSet<Persona>);

impl PersonaSet {
    pub fn new(personas: impl IntoIterator<Item = Persona>) -> Option<Self> {
        let set: BTreeSet<Persona> = personas.into_iter().collect();
        (!set.is_empty()).then_some(Self(set))
    }

    pub fn contains(&self, p: Persona) -> bool {
        self.0.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = Persona> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for PersonaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl TryFrom<Vec<Persona>> for PersonaSet {
    type Error = &'static str;
    fn try_from(v: Vec<Persona>) -> Result<Self, &'static str> {
        PersonaSet::new(v).ok_or("persona set must not be empty")
    }
}

impl From<PersonaSet> for Vec<Persona> {
    fn from(s: PersonaSet) -> Vec<Persona> {
        s.0.into_iter().collect()
    }
}

pub const FLAG_COUNT: usize = 23;

/// Boolean founder attributes, in the order the labelling prompt lists them
/// and the order completions are read back.
pub const FLAG_NAMES: [&str; FLAG_COUNT] = [
    "is_firsttime_founder",
    "is_researcher",
    "is_phd",
    "is_scholarship",
    "is_young_grad",
    "is_dropout",
    "top_tier_uni",
    "multiple_degrees",
    "entrepreneurship_education",
    "few_years_experience",
    "decade_experience",
    "big_tech_experience",
    "comm_experience",
    "exec_experience",
    "is_investor",
    "is_board_member",
    "international_uni",
    "lived_multiple_countries",
    "has_job_hopped",
    "has_promotions",
    "is_top_tier_consultant",
    "is_top_tier_banker",
    "founded_under_30",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct FlagVector([bool; FLAG_COUNT]);

impl FlagVector {
    pub fn new(flags: [bool; FLAG_COUNT]) -> Self {
        Self(flags)
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn by_name(&self, name: &str) -> Option<bool> {
        FLAG_NAMES.iter().position(|n| *n == name).map(|i| self.0[i])
    }

    pub fn as_array(&self) -> &[bool; FLAG_COUNT] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for FlagVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *b { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

impl TryFrom<Vec<u8>> for FlagVector {
    type Error = String;
    fn try_from(v: Vec<u8>) -> Result<Self, String> {
        if v.len() != FLAG_COUNT {
            return Err(format!("expected {FLAG_COUNT} flags, got {}", v.len()));
        }
        let mut out = [false; FLAG_COUNT];
        for (slot, x) in out.iter_mut().zip(&v) {
            *slot = match x {
                0 => false,
                1 => true,
                other => return Err(format!("flag value {other} is not 0 or 1")),
            };
        }
        Ok(FlagVector(out))
    }
}

impl From<FlagVector> for Vec<u8> {
    fn from(f: FlagVector) -> Vec<u8> {
        f.0.iter().map(|b| u8::from(*b)).collect()
    }
}

/// Level, personas and flags for one founder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentLabels {
    pub founder_id: String,
    pub level: LevelLabel,
    pub personas: PersonaSet,
    pub flags: FlagVector,
}
