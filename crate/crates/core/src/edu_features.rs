//! Rule-based education features: the highest degree earned and the set of
//! fields studied, both read from the LinkedIn document.
//!
//! Classification is keyword driven. The keyword lists ship in
//! `data/edu_keywords.txt` (format documented at the top of that file) and
//! are compiled into the crate; [`KeywordTable::parse`] accepts an
//! alternative list with the same format.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const BUILTIN_KEYWORDS: &str = include_str!("../data/edu_keywords.txt");

/// When several field categories match one fragment, the earliest entry here
/// wins: specific technical categories before broad ones.
pub const FIELD_PRIORITY: [u8; 10] = [5, 2, 1, 0, 9, 3, 4, 7, 8, 6];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EducationEntry {
    pub institution: String,
    pub degree_text: String,
    pub field_text: String,
    start_year: Option<i32>,
    end_year: Option<i32>,
}

impl EducationEntry {
    /// Builds an entry; an end year earlier than the start year is dropped.
    pub fn new(
        institution: impl Into<String>,
        degree_text: impl Into<String>,
        field_text: impl Into<String>,
        start_year: Option<i32>,
        end_year: Option<i32>,
    ) -> Self {
        let end_year = match (start_year, end_year) {
            (Some(s), Some(e)) if e < s => None,
            _ => end_year,
        };
        Self {
            institution: institution.into(),
            degree_text: degree_text.into(),
            field_text: field_text.into(),
            start_year,
            end_year,
        }
    }

    pub fn start_year(&self) -> Option<i32> {
        self.start_year
    }

    pub fn end_year(&self) -> Option<i32> {
        self.end_year
    }
}

/// Highest degree: 0 none/unknown, 1 bachelor, 2 master, 3 doctorate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct DegreeCode(u8);

impl DegreeCode {
    pub const NONE: DegreeCode = DegreeCode(0);
    pub const BACHELOR: DegreeCode = DegreeCode(1);
    pub const MASTER: DegreeCode = DegreeCode(2);
    pub const DOCTORATE: DegreeCode = DegreeCode(3);

    pub fn new(value: u8) -> Option<Self> {
        (value <= 3).then_some(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for DegreeCode {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        DegreeCode::new(v).ok_or_else(|| alloc::format!("degree code {v} outside 0..=3"))
    }
}

impl From<DegreeCode> for u8 {
    fn from(d: DegreeCode) -> u8 {
        d.0
    }
}

/// Field-of-study codes, each in `0..=9`. May be empty.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCodeSet(BTreeSet<u8>);

impl FieldCodeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a code; codes above 9 are ignored and reported as `false`.
    pub fn insert(&mut self, code: u8) -> bool {
        code <= 9 && self.0.insert(code)
    }

    pub fn contains(&self, code: u8) -> bool {
        self.0.contains(&code)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<u8> for FieldCodeSet {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        let mut s = FieldCodeSet::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KeywordTableError {
    #[error("missing `version = N` line")]
    MissingVersion,
    #[error("line {0}: malformed block header")]
    BadHeader(usize),
    #[error("line {0}: code out of range for its block kind")]
    BadCode(usize),
    #[error("line {0}: keyword outside of any block")]
    OrphanKeyword(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Degree,
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Word {
    text: String,
    prefix: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Phrase {
    words: Vec<Word>,
    code: u8,
}

impl Phrase {
    fn matches_at(&self, tokens: &[String], at: usize) -> bool {
        if at + self.words.len() > tokens.len() {
            return false;
        }
        self.words.iter().zip(&tokens[at..]).all(|(w, t)| {
            if w.prefix {
                t.starts_with(w.text.as_str())
            } else {
                *t == w.text
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Match {
    start: usize,
    len: usize,
    code: u8,
}

/// Parsed keyword lists for degree and field classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordTable {
    version: u32,
    degree: Vec<Phrase>,
    field: Vec<Phrase>,
}

impl Default for KeywordTable {
    fn default() -> Self {
        Self::builtin()
    }
}

impl KeywordTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_KEYWORDS).expect("bundled keyword table is valid")
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    pub fn parse(text: &str) -> Result<Self, KeywordTableError> {
        let mut version = None;
        let mut degree = Vec::new();
        let mut field = Vec::new();
        let mut current: Option<(BlockKind, u8)> = None;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if version.is_none() {
                let v = line
                    .strip_prefix("version")
                    .and_then(|r| r.trim_start().strip_prefix('='))
                    .and_then(|r| r.trim().parse::<u32>().ok())
                    .ok_or(KeywordTableError::MissingVersion)?;
                version = Some(v);
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let (head, _label) = rest.split_once(']').ok_or(KeywordTableError::BadHeader(lineno))?;
                let mut parts = head.split_whitespace();
                let kind = match parts.next() {
                    Some("degree") => BlockKind::Degree,
                    Some("field") => BlockKind::Field,
                    _ => return Err(KeywordTableError::BadHeader(lineno)),
                };
                let code: u8 = parts
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or(KeywordTableError::BadHeader(lineno))?;
                let valid = match kind {
                    BlockKind::Degree => (1..=3).contains(&code),
                    BlockKind::Field => code <= 9,
                };
                if !valid {
                    return Err(KeywordTableError::BadCode(lineno));
                }
                current = Some((kind, code));
                continue;
            }
            let (kind, code) = current.ok_or(KeywordTableError::OrphanKeyword(lineno))?;
            let (body, prefix) = match line.strip_suffix('*') {
                Some(b) => (b, true),
                None => (line, false),
            };
            let mut words: Vec<Word> = tokenize(body)
                .into_iter()
                .map(|text| Word {
                    text,
                    prefix: false,
                })
                .collect();
            if words.is_empty() {
                continue;
            }
            if let Some(last) = words.last_mut() {
                last.prefix = prefix;
            }
            let phrase = Phrase { words, code };
            match kind {
                BlockKind::Degree => degree.push(phrase),
                BlockKind::Field => field.push(phrase),
            }
        }
        Ok(Self {
            version: version.ok_or(KeywordTableError::MissingVersion)?,
            degree,
            field,
        })
    }

    pub fn map_degree(&self, degree_text: &str) -> DegreeCode {
        let tokens = tokenize(degree_text);
        longest_matches(&self.degree, &tokens)
            .iter()
            .map(|m| m.code)
            .max()
            .map_or(DegreeCode::NONE, DegreeCode)
    }

    pub fn map_field(&self, field_text: &str) -> Option<u8> {
        let tokens = tokenize(field_text);
        best_by_priority(longest_matches(&self.field, &tokens).iter().map(|m| m.code))
    }

    /// Splits a compound field string and maps each fragment on its own.
    ///
    /// Fragments are separated by `, / ; & | +` and by the word "and" when it
    /// is not part of a keyword phrase ("Electrical and Computer Engineering"
    /// stays whole).
    pub fn map_field_compound(&self, field_text: &str) -> FieldCodeSet {
        let mut out = FieldCodeSet::new();
        for fragment in field_text.split([',', '/', ';', '&', '|', '+', '\n']) {
            let tokens = tokenize(fragment);
            let matches = longest_matches(&self.field, &tokens);
            let covered = |i: usize| matches.iter().any(|m| i >= m.start && i < m.start + m.len);
            let mut seg_start = 0;
            for i in 0..=tokens.len() {
                let boundary = i == tokens.len() || (tokens[i] == "and" && !covered(i));
                if !boundary {
                    continue;
                }
                let inside = matches
                    .iter()
                    .filter(|m| m.start >= seg_start && m.start + m.len <= i)
                    .map(|m| m.code);
                if let Some(code) = best_by_priority(inside) {
                    out.insert(code);
                }
                seg_start = i + 1;
            }
        }
        out
    }

    pub fn highest_education(&self, entries: &[EducationEntry]) -> DegreeCode {
        entries
            .iter()
            .map(|e| self.map_degree(&e.degree_text))
            .max()
            .unwrap_or(DegreeCode::NONE)
    }

    /// Union of the field codes over all entries. An entry without a field
    /// falls back to the part of its degree text after " in "
    /// ("BS in Computer Science").
    pub fn fields_of_study(&self, entries: &[EducationEntry]) -> FieldCodeSet {
        let mut out = FieldCodeSet::new();
        for e in entries {
            let text = if e.field_text.trim().is_empty() {
                degree_subject(&e.degree_text).unwrap_or("")
            } else {
                e.field_text.as_str()
            };
            for c in self.map_field_compound(text).iter() {
                out.insert(c);
            }
        }
        out
    }
}

fn degree_subject(degree_text: &str) -> Option<&str> {
    let lower = degree_text.to_ascii_lowercase();
    lower.find(" in ").map(|i| &degree_text[i + 4..])
}

fn best_by_priority(codes: impl Iterator<Item = u8>) -> Option<u8> {
    codes.min_by_key(|c| FIELD_PRIORITY.iter().position(|p| p == c).unwrap_or(usize::MAX))
}

/// Lowercases, deletes periods and apostrophes, and splits on every other
/// non-alphanumeric character.
fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch == '.' || ch == '\'' || ch == '\u{2019}' {
            continue;
        }
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            tokens.push(core::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    tokens
}

/// All phrase matches, reduced to a non-overlapping set preferring longer
/// phrases, then earlier starts. Returned in token order.
fn longest_matches(phrases: &[Phrase], tokens: &[String]) -> Vec<Match> {
    let mut all = Vec::new();
    for start in 0..tokens.len() {
        for p in phrases {
            if p.matches_at(tokens, start) {
                all.push(Match {
                    start,
                    len: p.words.len(),
                    code: p.code,
                });
            }
        }
    }
    all.sort_by(|a, b| b.len.cmp(&a.len).then(a.start.cmp(&b.start)));
    let mut taken = alloc::vec![false; tokens.len()];
    let mut kept = Vec::new();
    for m in all {
        if taken[m.start..m.start + m.len].iter().any(|t| *t) {
            continue;
        }
        taken[m.start..m.start + m.len].iter_mut().for_each(|t| *t = true);
        kept.push(m);
    }
    kept.sort_by_key(|m| m.start);
    kept
}

pub fn map_degree(degree_text: &str) -> DegreeCode {
    KeywordTable::builtin().map_degree(degree_text)
}

pub fn map_field(field_text: &str) -> Option<u8> {
    KeywordTable::builtin().map_field(field_text)
}

pub fn highest_education(entries: &[EducationEntry]) -> DegreeCode {
    KeywordTable::builtin().highest_education(entries)
}

pub fn fields_of_study(entries: &[EducationEntry]) -> FieldCodeSet {
    KeywordTable::builtin().fields_of_study(entries)
}

const SECTION_KEYS: [&str; 5] = ["education", "educations", "schools", "education_history", "educationHistory"];
const INSTITUTION_KEYS: [&str; 5] = ["school", "school_name", "schoolName", "institution", "name"];
const DEGREE_KEYS: [&str; 4] = ["degree_name", "degreeName", "degree", "degree_type"];
const FIELD_KEYS: [&str; 5] = ["field_of_study", "fieldOfStudy", "field", "major", "fields_of_study"];
const START_KEYS: [&str; 5] = ["starts_at", "start_date", "startDate", "start", "start_year"];
const END_KEYS: [&str; 5] = ["ends_at", "end_date", "endDate", "end", "end_year"];

/// Education entries of a LinkedIn document, in document order.
///
/// The first array found under one of the usual education keys (searched
/// depth first) is used. Documents that do not parse yield no entries.
pub fn extract_education(doc: &str) -> Vec<EducationEntry> {
    let Ok(value) = serde_json::from_str::<Value>(doc) else {
        return Vec::new();
    };
    let Some(items) = find_section(&value) else {
        return Vec::new();
    };
    items.iter().filter_map(entry_from_value).collect()
}

fn find_section(v: &Value) -> Option<&Vec<Value>> {
    match v {
        Value::Object(map) => {
            for key in SECTION_KEYS {
                if let Some(Value::Array(a)) = map.get(key) {
                    return Some(a);
                }
            }
            map.values().find_map(find_section)
        }
        Value::Array(a) => a.iter().find_map(find_section),
        _ => None,
    }
}

fn entry_from_value(v: &Value) -> Option<EducationEntry> {
    match v {
        Value::String(s) => Some(EducationEntry::new(s.clone(), "", "", None, None)),
        Value::Object(map) => {
            let text = |keys: &[&str]| {
                keys.iter()
                    .find_map(|k| map.get(*k).and_then(value_text))
                    .unwrap_or_default()
            };
            let year = |keys: &[&str]| keys.iter().find_map(|k| map.get(*k).and_then(value_year));
            Some(EducationEntry::new(
                text(&INSTITUTION_KEYS),
                text(&DEGREE_KEYS),
                text(&FIELD_KEYS),
                year(&START_KEYS),
                year(&END_KEYS),
            ))
        }
        _ => None,
    }
}

fn value_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
            (!parts.is_empty()).then(|| parts.join(", "))
        }
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn value_year(v: &Value) -> Option<i32> {
    match v {
        Value::Number(n) => n.as_i64().and_then(|y| i32::try_from(y).ok()),
        Value::String(s) => {
            let digits: String = s
                .chars()
                .skip_while(|c| !c.is_ascii_digit())
                .take_while(|c| c.is_ascii_digit())
                .collect();
            (digits.len() == 4).then(|| digits.parse().ok()).flatten()
        }
        Value::Object(map) => map.get("year").and_then(value_year),
        _ => None,
    }
}
