//! Success-rate tables by level, by persona, and by boolean flag.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::LabeledMatrix;
use crate::segmentation::{LevelLabel, Persona, FLAG_COUNT, FLAG_NAMES};

/// Default display filter for the flag table, in percentage points.
pub const DEFAULT_MIN_GAP_PP: f64 = 5.0;

/// Rendering of a rate over an empty group.
pub const UNDEFINED: &str = "\u{2014}";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateRow {
    pub key: String,
    pub total_count: usize,
    pub success_count: usize,
}

impl RateRow {
    fn new(key: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            total_count: 0,
            success_count: 0,
        }
    }

    fn add(&mut self, success: bool) {
        self.total_count += 1;
        self.success_count += usize::from(success);
    }

    /// `100 * successes / total`, or `None` for an empty group.
    pub fn success_rate_pct(&self) -> Option<f64> {
        (self.total_count > 0).then(|| 100.0 * self.success_count as f64 / self.total_count as f64)
    }

    pub fn format_rate(&self, decimals: usize) -> String {
        match self.success_rate_pct() {
            Some(r) => format!("{r:.decimals$}"),
            None => UNDEFINED.to_string(),
        }
    }
}

/// Rows `L1`..`L10`. Each founder counts in exactly one row.
pub fn success_by_level(m: &LabeledMatrix) -> Vec<RateRow> {
    let mut rows: Vec<RateRow> = LevelLabel::all().map(|l| RateRow::new(format!("{l}"))).collect();
    for r in m.rows() {
        let level = r.features.level();
        if let Some(row) = rows.get_mut(usize::from(level).wrapping_sub(1)) {
            row.add(r.success);
        }
    }
    rows
}

/// Rows `A`..`T`. A founder counts in every persona they carry.
pub fn success_by_persona(m: &LabeledMatrix) -> Vec<RateRow> {
    let mut rows: Vec<RateRow> = Persona::all().map(|p| RateRow::new(p.letter().to_string())).collect();
    for r in m.rows() {
        for p in Persona::all() {
            if r.features.has_persona(p) {
                rows[p.index()].add(r.success);
            }
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagRatePair {
    pub flag: String,
    pub no: RateRow,
    pub yes: RateRow,
}

impl FlagRatePair {
    /// `|rate(yes) - rate(no)|` in percentage points, when both are defined.
    pub fn gap_pp(&self) -> Option<f64> {
        Some((self.yes.success_rate_pct()? - self.no.success_rate_pct()?).abs())
    }
}

/// Yes/No rate pair for each of the 23 flags, unfiltered.
pub fn flag_rates(m: &LabeledMatrix) -> Vec<FlagRatePair> {
    let mut pairs: Vec<FlagRatePair> = FLAG_NAMES
        .iter()
        .map(|n| FlagRatePair {
            flag: n.to_string(),
            no: RateRow::new(format!("{n} (No)")),
            yes: RateRow::new(format!("{n} (Yes)")),
        })
        .collect();
    for r in m.rows() {
        for (i, pair) in pairs.iter_mut().enumerate().take(FLAG_COUNT) {
            if r.features.flag(i) {
                pair.yes.add(r.success);
            } else {
                pair.no.add(r.success);
            }
        }
    }
    pairs
}

/// Flag pairs whose rates differ by strictly more than `min_gap_pp`.
pub fn success_by_flag(m: &LabeledMatrix, min_gap_pp: f64) -> Vec<FlagRatePair> {
    flag_rates(m)
        .into_iter()
        .filter(|p| p.gap_pp().is_some_and(|g| g > min_gap_pp))
        .collect()
}

/// Aligned plain-text table.
pub fn render_text(title: &str, key_header: &str, rows: &[RateRow], decimals: usize) -> String {
    let key_w = rows.iter().map(|r| r.key.chars().count()).max().unwrap_or(0).max(key_header.len());
    let mut out = String::new();
    out.push_str(title);
    out.push('\n');
    out.push_str(&format!("{key_header:<key_w$}  {:>11}  {:>16}\n", "Total count", "Success rate (%)"));
    out.push_str(&format!("{}  {}  {}\n", "-".repeat(key_w), "-".repeat(11), "-".repeat(16)));
    for r in rows {
        let pad = key_w - r.key.chars().count();
        out.push_str(&format!(
            "{}{}  {:>11}  {:>16}\n",
            r.key,
            " ".repeat(pad),
            r.total_count,
            r.format_rate(decimals)
        ));
    }
    out
}

/// `key,total_count,success_count,success_rate_pct` with the rate rounded to
/// `decimals` and left empty when undefined.
pub fn render_csv(rows: &[RateRow], decimals: usize) -> String {
    let mut out = String::from("key,total_count,success_count,success_rate_pct\n");
    for r in rows {
        let rate = r.success_rate_pct().map(|v| format!("{v:.decimals$}")).unwrap_or_default();
        out.push_str(&format!("{},{},{},{}\n", r.key, r.total_count, r.success_count, rate));
    }
    out
}

/// Flattens pairs into `No` then `Yes` rows, in flag order.
pub fn flatten_pairs(pairs: &[FlagRatePair]) -> Vec<RateRow> {
    pairs.iter().flat_map(|p| [p.no.clone(), p.yes.clone()]).collect()
}
