//! Parsers for the labelling completions. Each one either returns a valid
//! label or a typed error; none of them panic on arbitrary input.

use alloc::string::{String, ToString};

use super::labels::{FlagVector, LevelLabel, Persona, PersonaSet, FLAG_COUNT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("no level token like `L3` found")]
    NoLevel,
    #[error("level L{0} outside L1..L10")]
    LevelOutOfRange(u32),
    #[error("no bracketed list found")]
    NoList,
    #[error("bracketed list is empty")]
    EmptyList,
    #[error("`{0}` is not a persona letter A-T")]
    InvalidPersona(String),
    #[error("expected {expected} flags, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("flag element `{0}` is not 0 or 1")]
    NonBinary(String),
}

/// First `L<digits>` token (case-insensitive) that is not glued to other
/// letters or digits.
pub fn parse_level(text: &str) -> Result<LevelLabel, ParseError> {
    let bytes = text.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b != b'L' && b != b'l' {
            continue;
        }
        if i > 0 && bytes[i - 1].is_ascii_alphanumeric() {
            continue;
        }
        let digits = bytes[i + 1..].iter().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            continue;
        }
        let end = i + 1 + digits;
        if end < bytes.len() && bytes[end].is_ascii_alphabetic() {
            continue;
        }
        let value: u32 = if digits > 3 {
            u32::MAX
        } else {
            text[i + 1..end].parse().unwrap_or(u32::MAX)
        };
        return u8::try_from(value)
            .ok()
            .and_then(LevelLabel::new)
            .ok_or(ParseError::LevelOutOfRange(value));
    }
    Err(ParseError::NoLevel)
}

/// Contents of the last `[...]` in the text.
fn last_bracketed(text: &str) -> Option<&str> {
    let close = text.rfind(']')?;
    let open = text[..close].rfind('[')?;
    Some(&text[open + 1..close])
}

fn clean_token(t: &str) -> &str {
    t.trim()
        .trim_matches(|c: char| matches!(c, '"' | '\'' | '`' | '(' | ')' | '*'))
        .trim()
}

/// The last bracketed list, e.g. `Final assignment: [K, M, N]`.
pub fn parse_personas(text: &str) -> Result<PersonaSet, ParseError> {
    let inner = last_bracketed(text).ok_or(ParseError::NoList)?;
    if inner.trim().is_empty() {
        return Err(ParseError::EmptyList);
    }
    let mut personas = alloc::vec::Vec::new();
    for raw in inner.split(',') {
        let tok = clean_token(raw);
        let mut chars = tok.chars();
        let persona = match (chars.next(), chars.next()) {
            (Some(c), None) => Persona::from_letter(c),
            _ => None,
        };
        personas.push(persona.ok_or_else(|| ParseError::InvalidPersona(tok.to_string()))?);
    }
    PersonaSet::new(personas).ok_or(ParseError::EmptyList)
}

/// The last bracketed list of exactly 23 zeros and ones, mapped onto the
/// flag order.
pub fn parse_flags(text: &str) -> Result<FlagVector, ParseError> {
    let inner = last_bracketed(text).ok_or(ParseError::NoList)?;
    if inner.trim().is_empty() {
        return Err(ParseError::WrongLength {
            expected: FLAG_COUNT,
            found: 0,
        });
    }
    let found = inner.split(',').count();
    if found != FLAG_COUNT {
        return Err(ParseError::WrongLength {
            expected: FLAG_COUNT,
            found,
        });
    }
    let mut flags = [false; FLAG_COUNT];
    for (slot, raw) in flags.iter_mut().zip(inner.split(',')) {
        *slot = match clean_token(raw) {
            "0" => false,
            "1" => true,
            other => return Err(ParseError::NonBinary(other.to_string())),
        };
    }
    Ok(FlagVector::new(flags))
}
