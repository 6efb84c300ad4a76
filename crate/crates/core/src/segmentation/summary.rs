//! Founder summaries and the three numbered answer blocks that close them.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct University {
    pub name: String,
    /// QS World University ranking as stated by the model.
    pub qs_rank: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorCompany {
    pub name: String,
    pub status: String,
    /// As asserted by the model; never looked up independently.
    pub net_worth_usd: Option<f64>,
}

/// A generated founder summary.
///
/// `text` is the full completion and is what later stages receive. The
/// structured fields are `None` when the matching answer block is missing or
/// unreadable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FounderSummary {
    pub founder_id: String,
    pub text: String,
    pub narrative: String,
    pub universities: Option<Vec<University>>,
    prior_experience_years: Option<f64>,
    pub prior_companies: Option<Vec<PriorCompany>>,
}

impl FounderSummary {
    /// Splits a summary completion into narrative and answer blocks.
    pub fn parse(founder_id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let lines: Vec<&str> = text.lines().collect();
        let blocks = find_answer_blocks(&lines);
        let narrative_end = blocks.map_or(lines.len(), |b| b[0]);
        let narrative = lines[..narrative_end].join("\n").trim().to_string();
        let (universities, years, companies) = match blocks {
            Some([q1, q2, q3]) => {
                let a1 = answer_lines(&lines[q1 + 1..q2]);
                let a2 = answer_lines(&lines[q2 + 1..q3]);
                let a3 = answer_lines(&lines[q3 + 1..]);
                (parse_universities(&a1), parse_years(&a2), parse_companies(&a3))
            }
            None => (None, None, None),
        };
        Self {
            founder_id: founder_id.into(),
            text,
            narrative,
            universities,
            prior_experience_years: years.filter(|y| *y >= 0.0 && y.is_finite()),
            prior_companies: companies,
        }
    }

    pub fn prior_experience_years(&self) -> Option<f64> {
        self.prior_experience_years
    }
}

fn question_number(line: &str) -> Option<u8> {
    let t = line.trim_start().trim_start_matches(['*', '#', ' ']);
    let mut chars = t.chars();
    let d = chars.next()?.to_digit(10)?;
    (chars.next()? == ')').then_some(d as u8)
}

/// Line indices of the last `1)`, `2)`, `3)` question lines appearing in
/// that order.
fn find_answer_blocks(lines: &[&str]) -> Option<[usize; 3]> {
    let mut best = None;
    for (i, l) in lines.iter().enumerate() {
        if question_number(l) != Some(1) {
            continue;
        }
        let q2 = (i + 1..lines.len()).find(|&j| question_number(lines[j]) == Some(2));
        let q3 = q2.and_then(|q2| (q2 + 1..lines.len()).find(|&j| question_number(lines[j]) == Some(3)));
        if let (Some(q2), Some(q3)) = (q2, q3) {
            best = Some([i, q2, q3]);
        }
    }
    best
}

/// Non-empty answer lines with bullets, `$` wrappers and trailing
/// punctuation removed. Semicolon-separated items become separate lines.
fn answer_lines(block: &[&str]) -> Vec<String> {
    block
        .iter()
        .flat_map(|l| l.split(';'))
        .map(|l| {
            let l = l.trim().trim_start_matches(['-', '*', '\u{2022}']).trim();
            let l = l.trim_matches('$').trim();
            l.trim_end_matches(['.', ',']).trim().to_string()
        })
        .filter(|l| !l.is_empty())
        .collect()
}

fn is_not_available(lines: &[String]) -> bool {
    lines.len() == 1 && {
        let l = lines[0].to_ascii_lowercase();
        matches!(l.as_str(), "not available" | "none" | "n/a" | "na" | "unknown" | "not applicable")
            || l.starts_with("none ")
            || l.starts_with("not available")
    }
}

fn parse_universities(lines: &[String]) -> Option<Vec<University>> {
    if lines.is_empty() {
        return None;
    }
    if is_not_available(lines) {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    for l in lines {
        let (name, rank) = match l.rfind('#') {
            Some(h) => {
                let digits: String = l[h + 1..].chars().take_while(|c| c.is_ascii_digit()).collect();
                (l[..h].trim().trim_end_matches(',').trim(), digits.parse().ok())
            }
            None => (l.as_str(), None),
        };
        if !name.is_empty() {
            out.push(University {
                name: name.to_string(),
                qs_rank: rank,
            });
        }
    }
    (!out.is_empty()).then_some(out)
}

/// First unsigned decimal number in the block.
fn parse_years(lines: &[String]) -> Option<f64> {
    let first = lines.first()?;
    let start = first.find(|c: char| c.is_ascii_digit())?;
    let num: String = first[start..]
        .chars()
        .take_while(|c| c.is_ascii_digit() || *c == '.')
        .collect();
    num.trim_end_matches('.').parse().ok()
}

/// `20.5K`, `30.1M`, `1.2B`, `$4,000,000`; anything else is unknown.
pub fn parse_money(s: &str) -> Option<f64> {
    let t = s.trim().trim_start_matches('$').trim().replace(',', "");
    let (num, mult) = match t.chars().last()? {
        'K' | 'k' => (&t[..t.len() - 1], 1e3),
        'M' | 'm' => (&t[..t.len() - 1], 1e6),
        'B' | 'b' => (&t[..t.len() - 1], 1e9),
        _ => (t.as_str(), 1.0),
    };
    let v: f64 = num.trim().parse().ok()?;
    (v.is_finite() && v >= 0.0).then_some(v * mult)
}

fn parse_companies(lines: &[String]) -> Option<Vec<PriorCompany>> {
    if lines.is_empty() {
        return None;
    }
    if is_not_available(lines) {
        return Some(Vec::new());
    }
    let out: Vec<PriorCompany> = lines
        .iter()
        .filter_map(|l| {
            let mut parts = l.splitn(3, ',').map(str::trim);
            let name = parts.next().filter(|n| !n.is_empty())?;
            let status = parts.next().unwrap_or_default();
            let worth = parts.next().and_then(parse_money);
            Some(PriorCompany {
                name: name.to_string(),
                status: status.to_string(),
                net_worth_usd: worth,
            })
        })
        .collect();
    (!out.is_empty()).then_some(out)
}
