//! Input generators for the completion parsers.

#![allow(dead_code)]

use founderseg_core::segmentation::{FlagVector, LevelLabel, Persona, PersonaSet};
use proptest::prelude::*;

pub fn level() -> impl Strategy<Value = LevelLabel> {
    (1u8..=10).prop_map(|v| LevelLabel::new(v).unwrap())
}

pub fn persona_set() -> impl Strategy<Value = PersonaSet> {
    prop::collection::btree_set(0usize..20, 1..=20)
        .prop_map(|s| PersonaSet::new(s.into_iter().map(|i| Persona::from_index(i).unwrap())).unwrap())
}

pub fn flags() -> impl Strategy<Value = FlagVector> {
    prop::array::uniform23(any::<bool>()).prop_map(FlagVector::new)
}

/// Free text with no brackets and no letter L, so it cannot carry a label.
pub fn inert_text() -> impl Strategy<Value = String> {
    "[a-km-zA-KM-Z0-9 .,:;\n\t-]{0,60}"
}

/// Strings biased toward the shapes the parsers look for.
pub fn near_miss() -> impl Strategy<Value = String> {
    prop_oneof![
        any::<String>(),
        "[Ll\\[\\]0-9, \"'*()A-Za-z]{0,80}",
        "\\[[0-9, ]{0,80}\\]",
        "\\[[A-Za-z, ]{0,60}\\]",
        "(L[0-9]{1,12} ?){1,4}",
    ]
}

/// Every number written right after an `L`, leading zeros ignored.
pub fn level_values(s: &str) -> Vec<u32> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    for (i, c) in chars.iter().enumerate() {
        if !c.eq_ignore_ascii_case(&'l') {
            continue;
        }
        let digits: String = chars[i + 1..].iter().take_while(|d| d.is_ascii_digit()).collect();
        let trimmed = digits.trim_start_matches('0');
        if !digits.is_empty() && trimmed.len() <= 2 {
            out.push(trimmed.parse().unwrap_or(0));
        }
    }
    out
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

